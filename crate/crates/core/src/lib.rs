pub mod arith;
pub mod cli;
pub mod criterion;
pub mod fixtures;
pub mod generate;
pub mod ketparse;
pub mod oracle;
pub mod report;
pub mod selftest;
pub mod state;
pub mod structure;
