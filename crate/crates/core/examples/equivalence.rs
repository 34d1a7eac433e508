//! At quarter flux the ring is unitarily equivalent to two decoupled chains.

use abring::equivalence::{build_split, cross_block_norm, transform_u1, transform_u2, verify_equivalence};

fn main() -> abring::Result<()> {
    for gamma in [0.3, 1.0, 1.7] {
        let r = verify_equivalence(20, gamma)?;
        println!("gamma = {gamma}: |U1 H U1^+ - H_dimer| = {:.1e}, |U2 H_dimer U2^+ - H_split| = {:.1e}", r.norm1, r.norm2);
    }

    let n = 6;
    let u = transform_u1(n)?.then(&transform_u2(n)?);
    println!("combined map unitarity error {:.1e}", u.unitarity_error());
    let split = build_split(n, 0.5)?;
    println!("coupling between the two chains: {:.1e}", cross_block_norm(&split.entries, n));
    Ok(())
}
