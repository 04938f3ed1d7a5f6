//! Structural quality of a generated test against a reference (manually
//! adapted) test: Q_S = 1 - missing / |reference|, where an event is missing
//! when it has no identical counterpart (action, xpath, input) in the
//! generated test under an order-preserving injective matching.

use testadapt::appmodel::TestCase;

use crate::CliError;

/// Longest common subsequence under exact event equality.
fn lcs_len(reference: &TestCase, generated: &TestCase) -> usize {
    let a = &reference.events;
    let b = &generated.events;
    let mut dp = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            dp[i][j] = if a[i - 1] == b[j - 1] {
                dp[i - 1][j - 1] + 1
            } else {
                dp[i - 1][j].max(dp[i][j - 1])
            };
        }
    }
    dp[a.len()][b.len()]
}

pub fn structural_quality(generated: &TestCase, reference: &TestCase) -> Result<f64, CliError> {
    if reference.events.is_empty() {
        return Err(CliError::Input("reference test has no events".into()));
    }
    let matched = lcs_len(reference, generated);
    let missing = reference.events.len() - matched;
    Ok(1.0 - missing as f64 / reference.events.len() as f64)
}
