//! Spinal-set growth and ball lower bounds on a plate graph of dimension
//! (1, 1.5).

use spinal_lab::analysis::{fit_exponent, volume_lower_bound_check};
use spinal_lab::generators::{plates, PlateChoice, PlateSpec};

fn main() {
    let spec = PlateSpec { choice: PlateChoice::Mixed, seed: 3, ..PlateSpec::new(1.5, 2, 4096) };
    let pl = plates(&spec).unwrap();
    let sg = &pl.spinal;
    println!("{} vertices, fiber radius at n = 4096: {}", sg.graph().vertex_count(), pl.radii[4095]);

    let vols = sg.spinal_volumes(pl.spine_vertex(1), 2048);
    for k in [32, 128, 512, 2048] {
        println!("|D(1, {k:>4})| = {:>7}   / k^1.5 = {:.3}", vols[k], vols[k] as f64 / (k as f64).powf(1.5));
    }
    let pts: Vec<(f64, f64)> = (32..=2048).map(|k| (k as f64, vols[k] as f64)).collect();
    println!("fitted exponent {:.4}", fit_exponent(&pts).unwrap().slope);

    let centers: Vec<usize> = [1, 10, 100, 1000].iter().map(|&n| pl.spine_vertex(n)).collect();
    let vlb = volume_lower_bound_check(sg.graph(), sg.truncation(), 1.5, &centers, &[1, 8, 64, 512, 2048]).unwrap();
    println!("min |B(x, r)| / r^1.5 = {:.4} at {:?}", vlb.min_constant, vlb.argmin);
}
