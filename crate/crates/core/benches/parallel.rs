//! Placeholder bench; filled in once the harness module lands.

fn main() {}
