//! Nash-type ratio along the test functions g_2n, against the predicted
//! growth exponent.

use spinal_lab::analysis::{beta_from_nu, nash_curve};
use spinal_lab::generators::{plates, vicsek, PlateSpec};

fn main() {
    let log3_5 = 5f64.ln() / 3f64.ln();
    let v = vicsek(2, 6).unwrap();
    for p in [2.0, 4.0] {
        let curve = nash_curve(&v.spinal, v.center, p, beta_from_nu(log3_5), &[3, 9, 27, 81, 243]).unwrap();
        report("vicsek", &curve, 1.0, log3_5);
    }

    let pl = plates(&PlateSpec::new(1.5, 2, 4096)).unwrap();
    for p in [2.0, 3.0] {
        let curve = nash_curve(&pl.spinal, pl.spine_vertex(1), p, beta_from_nu(1.5), &[64, 128, 256, 512, 1024]).unwrap();
        report("plates", &curve, 1.0, 1.5);
    }
}

fn report(name: &str, curve: &spinal_lab::analysis::NashCurve, ds: f64, dg: f64) {
    println!("{name}, p = {}:", curve.p);
    for e in &curve.entries {
        println!("  n = {:>5}  ratio {:.6}", e.n, e.ratio);
    }
    let check = curve.slope_check(ds, dg, 0.15, 0.1).unwrap();
    println!("  slope {:.4}, predicted {:.4}", check.measured, check.expected);
}
