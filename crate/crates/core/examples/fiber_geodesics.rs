//! Minimal paths inside a fiber never leave it; a shortcut through the
//! spine is reported.

use spinal_lab::generators::sample_spinal_graph;
use spinal_lab::spinal::SpinalGraph;

fn main() {
    let sample = sample_spinal_graph();
    let sg = &sample.spinal;
    let report = sg.check_fiber_geodesics(&sg.fiber_pairs(usize::MAX));
    println!("{} pairs checked, {} violations", report.pairs_checked, report.violations.len());

    let (root, next) = (sg.pi(sample.x), 2);
    let shortcut = sg.graph().with_added_edge(sample.x, next).unwrap();
    let broken = SpinalGraph::new_unvalidated(shortcut, sg.spine().to_vec(), sg.projection().to_vec()).unwrap();
    let report = broken.check_fiber_geodesics(&broken.fiber_pairs(usize::MAX));
    for v in &report.violations {
        println!(
            "{}-{}: ambient {} < fiber {}, escapes through {:?}",
            v.a, v.b, v.ambient_distance, v.fiber_distance, v.escape
        );
    }
    println!("fiber of {root}: {:?}", sg.fiber(root));
}
