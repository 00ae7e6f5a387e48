//! Pull counts after which the radius is below a quarter of the gap.

use optibandit::CanonicalRadius;

fn main() -> optibandit::Result<()> {
    let (k, horizon) = (2.0, 20_000.0);
    let radius = CanonicalRadius::new(0.25, 0.0, 1.0 / (k * horizon))?;
    println!("{:>8} {:>10} {:>12} {:>10}", "gap", "m0", "r(m0)", "gap/4");
    for gap in [0.5, 0.2, 0.1, 0.05, 0.01] {
        let m0 = radius.collapse_threshold(gap)?;
        println!("{gap:>8} {m0:>10} {:>12.6} {:>10.6}", radius.radius(m0)?, gap / 4.0);
    }
    // a linear term only matters when it dominates
    let with_c1 = CanonicalRadius::new(0.25, 1.0, 1.0 / (k * horizon))?;
    println!("c1 = 1, gap 0.2: m0 = {}", with_c1.collapse_threshold(0.2)?);
    Ok(())
}
