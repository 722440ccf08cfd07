//! The trial state rewritten on the |±z⟩ ⊗ |±α⟩ basis.

use std::f64::consts::PI;

use aqrm::{ansatz, VariationalParams};

fn main() -> aqrm::Result<()> {
    let v = VariationalParams::new(0.5, 2.0 * PI / 3.0, 0.8)?;
    let c = ansatz::polaron_coefficients(&v);
    println!("|+z,+a>: {:+.6}", c.plus_z_pos);
    println!("|+z,-a>: {:+.6}", c.plus_z_neg);
    println!("|-z,+a>: {:+.6}", c.minus_z_pos);
    println!("|-z,-a>: {:+.6}", c.minus_z_neg);
    println!("self overlap {:.12}  norm {:.12}", c.self_overlap(v.alpha), ansatz::normalization(&v)?);
    Ok(())
}
