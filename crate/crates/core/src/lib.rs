pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod model;
pub mod ode;
pub mod operator;
pub mod optimize;
pub mod observables;
pub mod kerr;
pub mod kk;
