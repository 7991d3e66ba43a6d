//! Batch runner for `autlab` experiments described by JSON configs.

pub mod config;
pub mod runner;

use autlab::{blockcode, grouplab, shiftlang};

/// The built-in catalogue, one `kind name` line per entry, in fixed order.
pub fn builtins_listing() -> String {
    let mut out = String::new();
    for s in shiftlang::BUILTIN_SHIFTS {
        out.push_str(&format!("shift {s}\n"));
    }
    for c in blockcode::BUILTIN_CODES {
        out.push_str(&format!("code {c}\n"));
    }
    for g in grouplab::BUILTIN_GROUPS {
        let model = grouplab::builtin_group(g).expect("listed group exists");
        out.push_str(&format!("group {g} ({})\n", model.name()));
    }
    out
}
