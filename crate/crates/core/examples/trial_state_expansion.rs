//! Expands a squeezed trial state in the Fock basis and compares the
//! brute-force moments with the closed forms.

use std::f64::consts::PI;

use aqrm::oracle::{ansatz_state_vector, rayleigh_quotient, vector_moments, FockTruncation};
use aqrm::{ansatz, ModelParams, VariationalParams};

fn main() -> aqrm::Result<()> {
    let v = VariationalParams::with_gamma(0.5, 2.0 * PI / 3.0, 0.8, 0.2)?;
    let m = ModelParams::new(1.0, 1.0, 0.7, 0.3)?;
    let psi = ansatz_state_vector(&v, FockTruncation::new(64)?)?;
    let mo = vector_moments(&psi);
    let t = ansatz::terms(&v)?;

    let rows = [
        ("norm", t.norm, mo.norm),
        ("<a+a>", t.photon_number, mo.photon_number),
        ("<sz>", t.sz, mo.sz),
        ("<sx>", t.sx, mo.sx),
        ("<sx(a+a+)>", t.correlation, mo.correlation),
        ("energy", t.energy(&m), rayleigh_quotient(&m, &psi)?),
    ];
    for (name, closed, brute) in rows {
        println!("{name:>11}  {closed:+.12}  {brute:+.12}  {:.1e}", (closed - brute).abs());
    }
    Ok(())
}
