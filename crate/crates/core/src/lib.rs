pub mod catalog;
pub mod cli;
pub mod coeff;
pub mod deform;
pub mod homalg;
pub mod json;
pub mod presentation;
pub mod repbuild;
