//! How much of B(x, r) stays inside B(y, R) when x ∈ B(y, R) and r ≤ 2R.

use spinal_lab::generators::vicsek;
use spinal_lab::volume::{ball_intersection_min_ratio, IntersectionScan};

fn main() {
    let v = vicsek(2, 3).unwrap();
    let scan = IntersectionScan {
        centers: v.spinal.spine().iter().copied().step_by(4).collect(),
        radii: vec![1, 3, 9, 27],
        r_cap: 54,
        budget: 5_000_000,
        seed: 0,
    };
    let report = ball_intersection_min_ratio(v.spinal.graph(), &scan).unwrap();
    println!(
        "min ratio {:.4} = {}/{} at {:?}",
        report.min_ratio, report.min_intersection, report.min_ball, report.argmin
    );
    println!(
        "{} tuples ({}), r > 2d(x,y): {}, r <= 2d(x,y): {}",
        report.tuples,
        if report.exhaustive { "exhaustive" } else { "sampled" },
        report.case1_count,
        report.case2_count
    );
}
