//! Construction, search, and verification of Kaleidoscope designs: colored
//! collections of Fano planes, Hesse planes, and generic 2-(k,h,1) schemas,
//! built with difference-family methods over finite fields and cyclic groups.

pub mod algebra;
pub mod compose;
pub mod designs;
pub mod io;
pub mod schema;
pub mod search;
pub mod tables;
