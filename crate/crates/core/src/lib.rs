//! Exact computer algebra for the b-deformed tau-functions of weighted
//! Hurwitz numbers: Jack symmetric functions, the differential-operator
//! calculus and its commutation relations, the order-by-order decomposition
//! solver, and a flag-encoded enumerator of constellations on general
//! surfaces with MON-based b-weights.

pub mod exact;
pub mod partition;
pub mod symfunc;
pub mod jack;
pub mod series;
pub mod ops;
pub mod tau;
pub mod decomp;
pub mod maps;
