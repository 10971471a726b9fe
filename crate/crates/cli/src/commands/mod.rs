pub mod analytic;
pub mod compare;
pub mod render;
pub mod simulate;
