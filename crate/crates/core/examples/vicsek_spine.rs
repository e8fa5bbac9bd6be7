//! Build the Vicsek graph, list its spine and compare spinal sets with the
//! lower levels.

use spinal_lab::generators::{vicsek, vicsek_vertex_count};

fn main() {
    let v = vicsek(2, 4).expect("level 4 fits the size budget");
    let sg = &v.spinal;
    println!(
        "level {}: {} vertices (formula {}), {} on the spine",
        v.level,
        sg.graph().vertex_count(),
        vicsek_vertex_count(2, 4),
        sg.spine().len()
    );
    for k in 0..v.level {
        let r = 3usize.pow(k);
        println!(
            "|D(o, {r:>2})| = {:>5}   |B_Σ(o, {r:>2})| = {:>3}   level {k} has {} vertices",
            sg.spinal_set(v.center, r).len(),
            sg.spine_ball_size(v.center, r),
            vicsek_vertex_count(2, k)
        );
    }
    let corner = v.vertex_at(&[81, 81]).unwrap();
    println!("outer corner {corner}: fiber size {}, distance to o {}", sg.fiber(corner).len(), sg.graph().distance(v.center, corner));
}
