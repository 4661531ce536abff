pub mod christoffel;
pub mod driver;
pub mod error;
pub mod finsler;
pub mod front;
pub mod geodesic;
pub mod geometry;
pub mod medium;
pub mod oracle;
pub mod scenario;
