//! Decay tables along a lifted witness and their CSV form.

use serde::{Deserialize, Serialize};

use crate::cubic::CubicMap;
use crate::error::Result;
use crate::properness::lift::LiftedWitness;
use crate::properness::witness::decay_slope;
use crate::scalar::Scalar;

pub const CSV_HEADER: &str = "gamma,norm_x,norm_fhat,norm_z,norm_FA_z";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub gamma: f64,
    pub norm_x: f64,
    pub norm_fhat: f64,
    pub norm_z: f64,
    #[serde(rename = "norm_FA_z")]
    pub norm_fa_z: f64,
}

/// Norms of `x(γ)`, `F̂_A(x(γ))`, `z(γ)` and `F_A(z(γ))`, each evaluated
/// exactly before rounding.
pub fn decay_table(lw: &LiftedWitness) -> Result<Vec<DecayRow>> {
    let f = CubicMap::standard(lw.matrix.clone())?;
    let fhat = CubicMap::hat(lw.matrix.clone())?;
    lw.records
        .iter()
        .map(|r| {
            Ok(DecayRow {
                gamma: r.gamma.to_float(),
                norm_x: r.u.norm(),
                norm_fhat: fhat.eval(&r.u)?.norm(),
                norm_z: r.z.norm(),
                norm_fa_z: f.eval(&r.z)?.norm(),
            })
        })
        .collect()
}

/// Log-log slope of `‖F̂_A(x)‖` against `γ`.
pub fn fhat_slope(rows: &[DecayRow]) -> Result<f64> {
    decay_slope(&rows.iter().map(|r| (r.gamma, r.norm_fhat)).collect::<Vec<_>>())
}

/// Seventeen significant digits, enough to round-trip every double.
pub fn to_csv(rows: &[DecayRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            r.gamma, r.norm_x, r.norm_fhat, r.norm_z, r.norm_fa_z
        ));
    }
    out
}
