#![allow(dead_code)]

#[path = "../../../core/tests/common/brute.rs"]
pub mod brute;

use std::path::Path;
use std::process::{Command, Output};

pub const TEST_PARAMS: [(f64, f64); 4] = [(1.0, 0.9), (0.95, 0.9), (0.9, 0.8), (0.9, 0.5)];

pub fn pqmkz(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pqmkz"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("spawning pqmkz")
}

/// `(header, rows)` of a CSV document.
pub fn read_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}
