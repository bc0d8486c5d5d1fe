pub mod algebra;
pub mod lab;
pub mod models;
pub mod numerics;
pub mod ode;
