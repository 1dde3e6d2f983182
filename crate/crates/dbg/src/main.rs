use flatdio::surface::builtin;
use flatdio::scan::*;
use flatdio::geom::*;
use flatdio::Budget;

fn main() {
    let t = builtin("torus").unwrap();
    let cyls = enumerate_cylinders(&t, 5.0, Budget::default()).unwrap();
    println!("total cylinders: {}", cyls.len());
    for c in cyls.iter().take(30) {
        println!("dir {:.6} circ {:.4} width {:.4} area {:.4}", c.direction.angle(), c.circumference, c.width, c.area);
    }
    // check one missing direction by hand
    let v = PlanarVector::new(1.0, 3.0);
    let theta = direction_of(v).unwrap();
    let one = cylinders_in_direction(&t, theta, 5.0).unwrap();
    println!("dir(1,3): {} cylinders", one.len());
    for c in &one { println!("  circ {:.4} width {:.4}", c.circumference, c.width); }
}
