//! Lifting an `F̂_A` witness to an `F_A` witness.
//!
//! For `u = x(γ) ∈ Im(A)` take `y ∈ Im(Aᵀ)` with `A·y = u` and `v_small ∈
//! Im(Aᵀ)` with `A·v_small = u + A(u³)`. Then `x_ker = v_small − y − u³` lies
//! in `Ker(A)` and `z = x_ker + y` satisfies `F_A(z) = v_small`. Since `v_small`
//! tends to zero while `‖z‖ ~ γ³`, the lift exhibits `0 ∈ S_{F_A}`.

use serde::{Deserialize, Serialize};

use crate::cubic::CubicMap;
use crate::error::{Error, Result};
use crate::json::scalar_str;
use crate::matrix::Matrix;
use crate::properness::witness::WitnessSequence;
use crate::scalar::Rational;
use crate::subspace::CoimageSolver;
use crate::vector::Vector;

type Q = Rational;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftRecord {
    #[serde(with = "scalar_str")]
    pub gamma: Q,
    pub u: Vector<Q>,
    pub y: Vector<Q>,
    pub v_small: Vector<Q>,
    pub x_ker: Vector<Q>,
    pub z: Vector<Q>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftedWitness {
    pub matrix: Matrix<Q>,
    pub x_inf: Vector<Q>,
    /// Square system solved for the rowspace coordinates of `y`.
    pub system_matrix: Matrix<Q>,
    pub records: Vec<LiftRecord>,
}

pub fn lift_witness(a: &Matrix<Q>, ws: &WitnessSequence) -> Result<LiftedWitness> {
    if ws.certificate().matrix() != a {
        return Err(Error::PreconditionViolated(
            "witness was built for a different matrix".into(),
        ));
    }
    let solver = CoimageSolver::new(a)?;
    let records = ws
        .gammas()
        .iter()
        .map(|g| {
            let u = ws.point(g);
            let y = solver.solve(&u)?;
            let u3 = u.cube();
            let v_small = solver.solve(&(&u + &a.mul_vec(&u3)?))?;
            let x_ker = &(&v_small - &y) - &u3;
            let z = &x_ker + &y;
            Ok(LiftRecord {
                gamma: g.clone(),
                u,
                y,
                v_small,
                x_ker,
                z,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LiftedWitness {
        matrix: a.clone(),
        x_inf: ws.certificate().x_inf().clone(),
        system_matrix: solver.system_matrix().clone(),
        records,
    })
}

impl LiftedWitness {
    /// Re-checks every record exactly: `A·y = u`, `A·v_small = u + A(u³)`,
    /// `A·x_ker = 0`, `z = x_ker + y`, `F_A(z) = v_small` and `‖z‖ ≥ ‖y‖`.
    pub fn verify(&self) -> Result<()> {
        let a = &self.matrix;
        let f = CubicMap::standard(a.clone())?;
        for r in &self.records {
            let fail = |what: &str| Err(Error::InvalidCertificate(format!("γ = {}: {what}", r.gamma)));
            if a.mul_vec(&r.y)? != r.u {
                return fail("A·y ≠ u");
            }
            if a.mul_vec(&r.v_small)? != &r.u + &a.mul_vec(&r.u.cube())? {
                return fail("A·v_small ≠ u + A(u³)");
            }
            if !a.mul_vec(&r.x_ker)?.is_zero() {
                return fail("x_ker ∉ Ker(A)");
            }
            if r.z != &r.x_ker + &r.y {
                return fail("z ≠ x_ker + y");
            }
            if f.eval(&r.z)? != r.v_small {
                return fail("F_A(z) ≠ v_small");
            }
            if r.z.norm_sq() < r.y.norm_sq() {
                return fail("‖z‖ < ‖y‖");
            }
        }
        Ok(())
    }

    pub fn z_norms_increase(&self) -> bool {
        self.records.windows(2).all(|w| w[0].z.norm_sq() < w[1].z.norm_sq())
    }

    pub fn v_small_norms_decrease(&self) -> bool {
        self.records
            .windows(2)
            .all(|w| w[0].v_small.norm_sq() > w[1].v_small.norm_sq())
    }

    /// Limit of `F_A(z)` along the lift.
    pub fn anchor(&self) -> Vector<Q> {
        Vector::zeros(self.matrix.rows())
    }

    /// `z/‖z‖` tends to the direction of `−x∞³`.
    pub fn limiting_direction(&self) -> Vector<Q> {
        -self.x_inf.cube()
    }
}
