//! Batch verbs, the interactive `derive` loop and the HTTP session service
//! on top of `vpc-core`.

pub mod app;
pub mod cli;
pub mod repl;
pub mod service;
pub mod session;
pub mod view;
