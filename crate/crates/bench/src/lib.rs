//! Workloads shared by the criterion benches.

use tripost::{enumerate, parse_instance, EnumParams, TriSystem};

pub const SYS1: &str =
    "alphabet: ab\ndominoes:\nab | a | ab\nabb | babb | ab\nb | b | bb\nbba | baaa | ba\n";

pub fn sys1() -> TriSystem {
    parse_instance(SYS1).expect("fixture parses")
}

/// Every canonical instance with up to two dominoes, words up to length two,
/// over two letters.
pub fn small_corpus() -> Vec<TriSystem> {
    enumerate(EnumParams::new(2, 2, 2).expect("valid params")).expect("enumerates")
}
