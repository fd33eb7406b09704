//! File formats and verification suites for `mmlip-core`, and the library
//! half of the `mmlip` command-line tool.

pub mod json;
pub mod suites;

use mmlip_core::order::SearchBudget;

pub const MAX_PAIRS_VAR: &str = "MM_MAX_EXACT_PAIRS";

/// The default budget, with `max_pairs` taken from `MM_MAX_EXACT_PAIRS` when set.
pub fn budget_from_env() -> Result<SearchBudget, String> {
    let mut budget = SearchBudget::default();
    if let Ok(text) = std::env::var(MAX_PAIRS_VAR) {
        budget.max_pairs = text
            .trim()
            .parse()
            .map_err(|_| format!("{MAX_PAIRS_VAR}: expected a nonnegative integer, found {text:?}"))?;
    }
    Ok(budget)
}
