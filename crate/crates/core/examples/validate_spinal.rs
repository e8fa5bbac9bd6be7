//! Validate the sample spinal graph, then break it with a forbidden edge
//! and compare the structural check with path enumeration.

use spinal_lab::generators::{sample_forbidden_edges, sample_spinal_graph};
use spinal_lab::spinal::{validate_bruteforce, validate_structural};

fn main() {
    let sample = sample_spinal_graph();
    let sg = &sample.spinal;
    let g = sg.graph();
    println!(
        "sample graph: {} vertices, spine of {}, [x, y] = {}",
        g.vertex_count(),
        sg.spine().len(),
        sg.spinal_distance(sample.x, sample.y)
    );
    let ok = validate_structural(g, sg.spine(), sg.projection());
    let brute = validate_bruteforce(g, sg.spine(), sg.projection(), g.vertex_count(), 50_000_000).unwrap();
    println!("as drawn: structural {}, path enumeration {brute}", ok.is_valid());

    for (u, v) in sample_forbidden_edges() {
        let bad = g.with_added_edge(u, v).unwrap();
        let report = validate_structural(&bad, sg.spine(), sg.projection());
        let brute = validate_bruteforce(&bad, sg.spine(), sg.projection(), bad.vertex_count(), 50_000_000).unwrap();
        println!("with edge {u}-{v}: structural {}, path enumeration {brute}", report.is_valid());
        println!("  {}", serde_json::to_string(&report.violations).unwrap());
    }
}
