//! Fixtures shared by the benchmarks.

use mifkit::composers::embed;
use mifkit::constructions::{circular_f, circular_g, mif_singleton, mif_triangle};
use mifkit::SetFamily;

/// The 42-block MIF(4) built from F(4,2) and the triangle.
pub fn mif4a() -> SetFamily {
    embed(&circular_f(4, 2).unwrap(), &mif_triangle()).unwrap().result
}

/// The other 42-block MIF(4), from F(4,3) and a single point.
pub fn mif4b() -> SetFamily {
    embed(&circular_f(4, 3).unwrap(), &mif_singleton()).unwrap().result
}

/// The 234-block MIF(5).
pub fn mif5() -> SetFamily {
    embed(&circular_f(5, 3).unwrap(), &mif_triangle()).unwrap().result
}

pub fn g(k: usize, t: usize) -> SetFamily {
    circular_g(k, t).unwrap()
}
