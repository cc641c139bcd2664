//! Unbiased pass@k estimation, error@k by status kind, status-conversion
//! matrices, and length-binned breakdowns.

use crate::error::{Error, Result};
use crate::runner::{StatusGroup, StatusKind};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Per-problem sample counts and statuses.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemTally {
    pub id: String,
    pub statuses: Vec<StatusKind>,
}

impl ProblemTally {
    pub fn new(id: impl Into<String>, statuses: Vec<StatusKind>) -> ProblemTally {
        ProblemTally {
            id: id.into(),
            statuses,
        }
    }

    pub fn n(&self) -> usize {
        self.statuses.len()
    }

    pub fn c(&self) -> usize {
        self.statuses
            .iter()
            .filter(|s| **s == StatusKind::Pass)
            .count()
    }

    pub fn count_kind(&self, kind: StatusKind) -> usize {
        self.statuses.iter().filter(|s| **s == kind).count()
    }

    pub fn count_group(&self, group: StatusGroup) -> usize {
        self.statuses.iter().filter(|s| s.group() == group).count()
    }

    /// Majority status group; ties broken by severity order
    /// Pass > Semantic > Syntactic > Runtime.
    pub fn majority_group(&self) -> StatusGroup {
        let order = [
            StatusGroup::Pass,
            StatusGroup::Semantic,
            StatusGroup::Syntactic,
            StatusGroup::Runtime,
        ];
        let mut best = StatusGroup::Pass;
        let mut best_count = 0;
        for g in order {
            let count = self.count_group(g);
            if count > best_count {
                best = g;
                best_count = count;
            }
        }
        best
    }
}

/// pass@k = 1 - C(n-c, k)/C(n, k), computed in product form so large n never
/// overflows. C(a, k) = 0 when a < k.
pub fn pass_at_k(n: usize, c: usize, k: usize) -> Result<f64> {
    if k == 0 || k > n {
        return Err(Error::Contract(format!("pass_at_k requires 1 <= k <= n, got n={n} k={k}")));
    }
    if c > n {
        return Err(Error::Contract(format!("pass_at_k requires c <= n, got n={n} c={c}")));
    }
    if n - c < k {
        return Ok(1.0);
    }
    let mut ratio = 1.0_f64;
    for i in 0..k {
        ratio *= (n - c - i) as f64 / (n - i) as f64;
    }
    Ok(1.0 - ratio)
}

/// Mean per-problem pass@k over a set of tallies.
pub fn aggregate(tallies: &[ProblemTally], k: usize) -> Result<f64> {
    if tallies.is_empty() {
        return Err(Error::Contract("aggregate over empty tally list".into()));
    }
    let mut sum = 0.0;
    for t in tallies {
        sum += pass_at_k(t.n(), t.c(), k)?;
    }
    Ok(sum / tallies.len() as f64)
}

/// A status kind or grouped family, for error@k.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KindOrGroup {
    Kind(StatusKind),
    Group(StatusGroup),
}

/// error@k: the pass@k estimator applied with c = count of samples having the
/// given status kind or group.
pub fn error_at_k(tallies: &[ProblemTally], k: usize, kind: KindOrGroup) -> Result<f64> {
    if tallies.is_empty() {
        return Err(Error::Contract("error_at_k over empty tally list".into()));
    }
    let mut sum = 0.0;
    for t in tallies {
        let c = match kind {
            KindOrGroup::Kind(s) => t.count_kind(s),
            KindOrGroup::Group(g) => t.count_group(g),
        };
        sum += pass_at_k(t.n(), c, k)?;
    }
    Ok(sum / tallies.len() as f64)
}

pub const CONVERSION_GROUPS: [StatusGroup; 4] = [
    StatusGroup::Pass,
    StatusGroup::Semantic,
    StatusGroup::Syntactic,
    StatusGroup::Runtime,
];

/// 4x4 matrix of problem counts: cell (a, b) counts problems whose majority
/// status is `a` under base and `b` under treatment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConversionMatrix {
    pub counts: [[usize; 4]; 4],
    pub shared_problems: usize,
}

impl ConversionMatrix {
    pub fn cell(&self, base: StatusGroup, treat: StatusGroup) -> usize {
        self.counts[group_index(base)][group_index(treat)]
    }
}

fn group_index(g: StatusGroup) -> usize {
    CONVERSION_GROUPS.iter().position(|x| *x == g).unwrap()
}

pub fn conversion_matrix(
    base: &BTreeMap<String, ProblemTally>,
    treat: &BTreeMap<String, ProblemTally>,
) -> Result<ConversionMatrix> {
    let shared: Vec<&String> = base.keys().filter(|id| treat.contains_key(*id)).collect();
    if shared.is_empty() {
        return Err(Error::Contract(
            "conversion matrix requires a shared id set".into(),
        ));
    }
    let mut counts = [[0usize; 4]; 4];
    for id in &shared {
        let a = base[*id].majority_group();
        let b = treat[*id].majority_group();
        counts[group_index(a)][group_index(b)] += 1;
    }
    Ok(ConversionMatrix {
        counts,
        shared_problems: shared.len(),
    })
}

/// Pass@k per source-length quartile. Problems are sorted by source length
/// and split into four bins; remainders go to the lower bins (ties to lower).
pub fn length_quartiles(
    lengths: &BTreeMap<String, usize>,
    tallies: &[ProblemTally],
    k: usize,
) -> Result<[f64; 4]> {
    if tallies.len() < 4 {
        return Err(Error::Contract("length_quartiles requires >= 4 problems".into()));
    }
    let mut indexed: Vec<(usize, &ProblemTally)> = tallies
        .iter()
        .map(|t| {
            let len = lengths.get(&t.id).copied().ok_or_else(|| {
                Error::Contract(format!("no source length for problem {}", t.id))
            })?;
            Ok((len, t))
        })
        .collect::<Result<_>>()?;
    indexed.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.id.cmp(&b.1.id)));

    let n = indexed.len();
    let mut result = [0.0; 4];
    let mut start = 0;
    for (bin, slot) in result.iter_mut().enumerate() {
        // Lower bins absorb the remainder, so ties at the boundary fall low.
        let size = n / 4 + usize::from(bin < n % 4);
        let chunk: Vec<ProblemTally> = indexed[start..start + size]
            .iter()
            .map(|(_, t)| (*t).clone())
            .collect();
        *slot = aggregate(&chunk, k)?;
        start += size;
    }
    Ok(result)
}

/// Mean/sigma of explanation lengths (characters, code stripped) and of the
/// ratio against source-program lengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplanationStats {
    pub mean_len: f64,
    pub std_len: f64,
    pub mean_ratio: f64,
    pub std_ratio: f64,
}

pub fn explanation_stats(explanations: &[String], sources: &[String]) -> Result<ExplanationStats> {
    if explanations.is_empty() || explanations.len() != sources.len() {
        return Err(Error::Contract(
            "explanation_stats requires matched nonempty inputs".into(),
        ));
    }
    let lens: Vec<f64> = explanations
        .iter()
        .map(|e| strip_code(e).chars().count() as f64)
        .collect();
    let ratios: Vec<f64> = lens
        .iter()
        .zip(sources)
        .map(|(len, src)| {
            let slen = src.chars().count() as f64;
            if slen == 0.0 {
                0.0
            } else {
                len / slen
            }
        })
        .collect();
    let (mean_len, std_len) = mean_std(&lens);
    let (mean_ratio, std_ratio) = mean_std(&ratios);
    Ok(ExplanationStats {
        mean_len,
        std_len,
        mean_ratio,
        std_ratio,
    })
}

pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Removes backtick-fenced blocks and inline-backtick spans before counting
/// explanation length.
pub fn strip_code(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    // fenced blocks first
    let mut cleaned = String::new();
    loop {
        match rest.find("```") {
            Some(start) => {
                cleaned.push_str(&rest[..start]);
                match rest[start + 3..].find("```") {
                    Some(end) => rest = &rest[start + 3 + end + 3..],
                    None => {
                        rest = "";
                    }
                }
            }
            None => {
                cleaned.push_str(rest);
                break;
            }
        }
        if rest.is_empty() {
            break;
        }
    }
    // inline spans
    let mut chars = cleaned.chars().peekable();
    while let Some(c) = chars.next() {
        if c == '`' {
            let mut span = String::new();
            let mut closed = false;
            for c2 in chars.by_ref() {
                if c2 == '`' {
                    closed = true;
                    break;
                }
                span.push(c2);
            }
            if !closed {
                // unmatched trailing backtick: keep text, drop the tick
                out.push_str(&span);
            }
        } else {
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: exhaustive enumeration of all k-subsets of n
    /// samples, counting subsets with at least one pass.
    pub fn pass_at_k_bruteforce(n: usize, c: usize, k: usize) -> f64 {
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            let mut out = Vec::new();
            let mut cur = Vec::new();
            fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
                if cur.len() == k {
                    out.push(cur.clone());
                    return;
                }
                for i in start..n {
                    cur.push(i);
                    rec(i + 1, n, k, cur, out);
                    cur.pop();
                }
            }
            rec(0, n, k, &mut cur, &mut out);
            out
        }
        let all = subsets(n, k);
        let hits = all
            .iter()
            .filter(|s| s.iter().any(|&i| i < c)) // first c samples pass
            .count();
        hits as f64 / all.len() as f64
    }

    #[test]
    fn spot_values() {
        assert!((pass_at_k(20, 10, 1).unwrap() - 0.5).abs() < 1e-12);
        assert!((pass_at_k(5, 2, 3).unwrap() - 0.9).abs() < 1e-12);
        assert_eq!(pass_at_k(20, 0, 7).unwrap(), 0.0);
    }

    #[test]
    fn oracle_equivalence_small_n() {
        for n in 1..=8 {
            for c in 0..=n {
                for k in 1..=n {
                    let exact = pass_at_k(n, c, k).unwrap();
                    let brute = pass_at_k_bruteforce(n, c, k);
                    assert!(
                        (exact - brute).abs() < 1e-12,
                        "n={n} c={c} k={k}: {exact} vs {brute}"
                    );
                }
            }
        }
    }

    #[test]
    fn monotone_in_k_and_c() {
        for c in 0..=10 {
            let mut prev = 0.0;
            for k in 1..=10 {
                let v = pass_at_k(10, c, k).unwrap();
                assert!(v >= prev - 1e-12);
                prev = v;
            }
        }
        for k in 1..=10 {
            let mut prev = 0.0;
            for c in 0..=10 {
                let v = pass_at_k(10, c, k).unwrap();
                assert!(v >= prev - 1e-12);
                prev = v;
            }
        }
    }

    #[test]
    fn boundary_identities() {
        for n in 1..=12 {
            for c in 0..=n {
                let p1 = pass_at_k(n, c, 1).unwrap();
                assert!((p1 - c as f64 / n as f64).abs() < 1e-12);
                let pn = pass_at_k(n, c, n).unwrap();
                assert_eq!(pn, if c >= 1 { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn k_larger_than_n_rejected() {
        assert!(pass_at_k(5, 2, 6).is_err());
    }

    fn tally(id: &str, statuses: &[StatusKind]) -> ProblemTally {
        ProblemTally::new(id, statuses.to_vec())
    }

    #[test]
    fn aggregate_means() {
        let t = vec![
            tally("a", &[StatusKind::Pass, StatusKind::Pass]),
            tally("b", &[StatusKind::AssertionError, StatusKind::TypeError]),
        ];
        assert!((aggregate(&t, 1).unwrap() - 0.5).abs() < 1e-12);
        assert!(aggregate(&[], 1).is_err());
    }

    #[test]
    fn error_at_k_values() {
        let all_assert = tally("a", &[StatusKind::AssertionError; 20]);
        let v = error_at_k(&[all_assert.clone()], 1, KindOrGroup::Kind(StatusKind::AssertionError)).unwrap();
        assert_eq!(v, 1.0);
        let none = error_at_k(&[all_assert], 1, KindOrGroup::Kind(StatusKind::TypeError)).unwrap();
        assert_eq!(none, 0.0);
    }

    #[test]
    fn error_at_k_matches_bruteforce_on_mixed_fixture() {
        let t = tally(
            "m",
            &[
                StatusKind::Pass,
                StatusKind::AssertionError,
                StatusKind::AssertionError,
                StatusKind::TypeError,
                StatusKind::RuntimeError,
                StatusKind::Pass,
            ],
        );
        for k in 1..=6 {
            let v = error_at_k(&[t.clone()], k, KindOrGroup::Kind(StatusKind::AssertionError)).unwrap();
            let brute = pass_at_k_bruteforce(6, 2, k);
            assert!((v - brute).abs() < 1e-12);
        }
    }

    #[test]
    fn conversion_matrix_diagonal_when_identical() {
        let mut base = BTreeMap::new();
        base.insert("a".to_string(), tally("a", &[StatusKind::Pass]));
        base.insert("b".to_string(), tally("b", &[StatusKind::AssertionError]));
        let m = conversion_matrix(&base, &base).unwrap();
        assert_eq!(m.cell(StatusGroup::Pass, StatusGroup::Pass), 1);
        assert_eq!(m.cell(StatusGroup::Semantic, StatusGroup::Semantic), 1);
        assert_eq!(m.counts.iter().flatten().sum::<usize>(), 2);
    }

    #[test]
    fn conversion_matrix_single_flip() {
        let mut base = BTreeMap::new();
        let mut treat = BTreeMap::new();
        base.insert("a".to_string(), tally("a", &[StatusKind::Pass]));
        treat.insert("a".to_string(), tally("a", &[StatusKind::AssertionError]));
        let m = conversion_matrix(&base, &treat).unwrap();
        assert_eq!(m.cell(StatusGroup::Pass, StatusGroup::Semantic), 1);
        assert_eq!(m.counts.iter().flatten().sum::<usize>(), 1);
    }

    #[test]
    fn conversion_matrix_disjoint_ids_rejected() {
        let mut base = BTreeMap::new();
        let mut treat = BTreeMap::new();
        base.insert("a".to_string(), tally("a", &[StatusKind::Pass]));
        treat.insert("b".to_string(), tally("b", &[StatusKind::Pass]));
        assert!(conversion_matrix(&base, &treat).is_err());
    }

    #[test]
    fn majority_ties_break_by_severity() {
        let t = tally("a", &[StatusKind::Pass, StatusKind::AssertionError]);
        assert_eq!(t.majority_group(), StatusGroup::Pass);
        let t = tally("a", &[StatusKind::TypeError, StatusKind::AssertionError]);
        assert_eq!(t.majority_group(), StatusGroup::Semantic);
    }

    #[test]
    fn quartiles_tie_to_lower_bin() {
        let mut lengths = BTreeMap::new();
        let mut tallies = Vec::new();
        for (i, id) in ["a", "b", "c", "d"].iter().enumerate() {
            lengths.insert(id.to_string(), 10); // all equal lengths
            let status = if i < 2 { StatusKind::Pass } else { StatusKind::AssertionError };
            tallies.push(tally(id, &[status]));
        }
        let q = length_quartiles(&lengths, &tallies, 1).unwrap();
        // one problem per bin, id order breaks the tie
        assert_eq!(q, [1.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn quartiles_monotone_fixture() {
        let mut lengths = BTreeMap::new();
        let mut tallies = Vec::new();
        for i in 0..8 {
            let id = format!("p{i}");
            lengths.insert(id.clone(), i * 10);
            let status = if i < 4 { StatusKind::Pass } else { StatusKind::AssertionError };
            tallies.push(tally(&id, &[status]));
        }
        let q = length_quartiles(&lengths, &tallies, 1).unwrap();
        assert!(q[0] >= q[1] && q[1] >= q[2] && q[2] >= q[3]);
        assert!(length_quartiles(&lengths, &tallies[..3], 1).is_err());
    }

    #[test]
    fn strip_code_spans() {
        assert_eq!(strip_code("uses `set(x)` here"), "uses  here");
        assert_eq!(strip_code("a ```js\ncode\n``` b"), "a  b");
        assert_eq!(strip_code("trailing `tick"), "trailing tick");
    }

    #[test]
    fn explanation_stats_cases() {
        let s = explanation_stats(
            &["x".repeat(96)],
            &["y".repeat(62)],
        )
        .unwrap();
        assert!((s.mean_ratio - 96.0 / 62.0).abs() < 1e-12);

        let same = explanation_stats(&["abc".to_string()], &["abc".to_string()]).unwrap();
        assert!((same.mean_ratio - 1.0).abs() < 1e-12);

        let empty = explanation_stats(&[String::new()], &["abc".to_string()]).unwrap();
        assert_eq!(empty.mean_len, 0.0);
        assert_eq!(empty.mean_ratio, 0.0);
    }
}
