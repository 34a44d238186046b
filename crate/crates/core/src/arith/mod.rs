pub mod ff;
pub mod ffpoly;
pub mod int;
pub mod matmod;
pub mod qmat;
pub mod zlattice;
