pub mod check;
pub mod gap;
pub mod gen;
pub mod geometry;
pub mod interfere;
pub mod scan;
pub mod threshold;
