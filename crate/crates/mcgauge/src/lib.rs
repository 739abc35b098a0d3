//! Exact obstruction theory for Maurer-Cartan elements and A-infinity structures.

pub mod linalg;
pub mod graded;
pub mod ainf;
pub mod lie;
pub mod samples;
pub mod transfer;
pub mod formality;
pub mod highconn;
pub mod cli;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/command-line.md")]
    mod command_line {}
    #[doc = include_str!("../../../book/src/transfer.md")]
    mod transfer {}
    #[doc = include_str!("../../../book/src/operations.md")]
    mod operations {}
    #[doc = include_str!("../../../book/src/obstructions.md")]
    mod obstructions {}
    #[doc = include_str!("../../../book/src/kaledin.md")]
    mod kaledin {}
    #[doc = include_str!("../../../book/src/characteristic.md")]
    mod characteristic {}
    #[doc = include_str!("../../../book/src/highconn.md")]
    mod highconn {}
    #[doc = include_str!("../../../book/src/certificates.md")]
    mod certificates {}
}
