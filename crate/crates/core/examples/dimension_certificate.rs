//! Certify the dimensions (1, log_3 5) of the Vicsek graph along n_k = 3^k
//! and fit the ball growth exponent.

use spinal_lab::analysis::{certify_dimensions, fit_exponent, DimensionThresholds};
use spinal_lab::generators::vicsek;

fn main() {
    let v = vicsek(2, 6).unwrap();
    let log3_5 = 5f64.ln() / 3f64.ln();
    let ns: Vec<usize> = (0..=5).map(|k| 3usize.pow(k)).collect();
    let cert = certify_dimensions(&v.spinal, v.center, &ns, 1.0, log3_5, DimensionThresholds::default()).unwrap();
    println!("{:>4} {:>8} {:>8} {:>8} {:>8}", "n", "|D(n)|", "|D(2n)|", "spine", "window");
    for r in &cert.rows {
        println!(
            "{:>4} {:>8} {:>8} {:>8.3} {:>8.3}",
            r.n, r.spinal_volume, r.spinal_volume_2n, r.spine_ratio, r.window_ratio
        );
    }
    println!(
        "c_double {:.3}, c_spine {:.3}, window [{:.3}, {:.3}] -> passes: {}",
        cert.c_double, cert.c_spine, cert.c_lo, cert.c_hi, cert.passes
    );

    let vt = v.spinal.graph().volume_table(v.center, 729);
    let pts: Vec<(f64, f64)> = (1..=729).map(|r| (r as f64, vt.volume(r) as f64)).collect();
    let fit = fit_exponent(&pts).unwrap();
    println!("|B(o, r)| ~ r^{:.4} (log_3 5 = {log3_5:.4})", fit.slope);
}
