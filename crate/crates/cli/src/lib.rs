//! Command-line front end for the Positivstellensatz witness toolkit:
//! text formats (problems, pencils, certificates) and the end-to-end
//! assemble / solve / rationalize / verify pipeline.

pub mod format;
pub mod parse;
pub mod pipeline;
