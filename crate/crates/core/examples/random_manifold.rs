//! Seeded random manifolds: reproducible test models with every allowed
//! transition populated.
//!
//! cargo run --example random_manifold -- 42

use xcs2d::io::format_manifold;
use xcs2d::{random_manifold, RandomManifoldSpec};

fn main() -> xcs2d::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(7);
    let spec = RandomManifoldSpec {
        n_g: 1,
        n_ea: 2,
        n_eb: 2,
        n_f: 3,
        ..RandomManifoldSpec::default()
    };
    let m = random_manifold(seed, &spec)?;
    print!(
        "{}",
        format_manifold(&m, Some(&format!("random manifold, seed {seed}")))
    );
    Ok(())
}
