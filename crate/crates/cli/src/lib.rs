//! Command implementations behind the `finsub` binary.

pub mod commands;
pub mod verify;
pub mod workbench;

pub use commands::{
    cache_clear, cache_stats, cmd_groupcoh, cmd_homology, cmd_page, cmd_space, exit_code,
    GroupEntry, GroupcohReport, HomologyReport, SpectralReport,
};
pub use verify::{verify, verify_case, Claim, Verdict, VerificationReport};
pub use workbench::{Construction, Limits, SpaceSpec, Workbench};

/// Exit status when every verdict matches.
pub const EXIT_OK: i32 = 0;
/// Exit status when some verdict is a mismatch.
pub const EXIT_MISMATCH: i32 = 1;
/// Exit status for usage errors and invalid input.
pub const EXIT_USAGE: i32 = 2;
/// Exit status when a resource budget would be exceeded.
pub const EXIT_BUDGET: i32 = 3;

/// Exit status of a verification run: only mismatches fail it.
pub fn verify_exit_code(reports: &[VerificationReport]) -> i32 {
    if reports.iter().any(|r| r.verdict == Verdict::Mismatch) {
        EXIT_MISMATCH
    } else {
        EXIT_OK
    }
}
