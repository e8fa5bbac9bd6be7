//! Glue fibers onto a skeleton, split the result again and compare
//! canonical forms.

use spinal_lab::generators::path_graph;
use spinal_lab::graph::Graph;
use spinal_lab::spinal::{glue, CanonicalForm, Fiber};

fn main() {
    let skeleton = path_graph(3);
    let triangle = Graph::from_edges(&[(0, 1), (1, 2), (0, 2)]).unwrap();
    let fibers = vec![
        Fiber { graph: path_graph(1), root: 0 },
        Fiber { graph: triangle, root: 2 },
        Fiber { graph: path_graph(4), root: 1 },
    ];
    let sg = glue(&skeleton, &fibers).unwrap();
    println!("glued: {} vertices, edges {:?}", sg.graph().vertex_count(), sg.graph().edges().collect::<Vec<_>>());
    println!("projection: {:?}", sg.projection());

    let parts = sg.decompose();
    for (i, f) in parts.fibers.iter().enumerate() {
        println!("fiber {i}: {} vertices, ambient ids {:?}", f.graph.vertex_count(), parts.embedding[i]);
    }
    let again = glue(&parts.skeleton, &parts.fibers).unwrap();
    assert_eq!(again.canonical_form(), sg.canonical_form());
    println!("reglued labels canonical: {}", CanonicalForm::of(&again) == sg.canonical_form());
}
