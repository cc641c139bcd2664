//! Lexical BM25 retrieval over source programs, used to fetch explanations
//! from similar problems (leave-one-out).

use crate::error::{Error, Result};
use std::collections::BTreeMap;

const K1: f64 = 1.5;
const B: f64 = 0.75;

/// Splits a program into lowercase subtokens: alphanumeric runs are first
/// isolated, then split on underscores and camelCase boundaries.
pub fn tokenize_program(source: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut word = String::new();
    for c in source.chars() {
        if c.is_alphanumeric() || c == '_' {
            word.push(c);
        } else if !word.is_empty() {
            split_subtokens(&word, &mut tokens);
            word.clear();
        }
    }
    if !word.is_empty() {
        split_subtokens(&word, &mut tokens);
    }
    tokens
}

fn split_subtokens(word: &str, out: &mut Vec<String>) {
    for piece in word.split('_') {
        if piece.is_empty() {
            continue;
        }
        // camelCase / PascalCase / digit boundaries
        let chars: Vec<char> = piece.chars().collect();
        let mut cur = String::new();
        for (i, &c) in chars.iter().enumerate() {
            let boundary = i > 0
                && ((c.is_uppercase() && chars[i - 1].is_lowercase())
                    || (c.is_alphabetic() && chars[i - 1].is_numeric())
                    || (c.is_numeric() && chars[i - 1].is_alphabetic()));
            if boundary && !cur.is_empty() {
                out.push(cur.to_lowercase());
                cur = String::new();
            }
            cur.push(c);
        }
        if !cur.is_empty() {
            out.push(cur.to_lowercase());
        }
    }
}

/// BM25 Okapi index with the non-negative IDF variant
/// ln((N - df + 0.5)/(df + 0.5) + 1).
#[derive(Debug, Clone)]
pub struct Bm25Index {
    docs: Vec<Doc>,
    doc_freq: BTreeMap<String, usize>,
    avg_len: f64,
}

#[derive(Debug, Clone)]
struct Doc {
    id: String,
    term_freq: BTreeMap<String, usize>,
    len: usize,
}

impl Bm25Index {
    /// Builds an index from (id, source) pairs. Duplicate ids are rejected.
    pub fn build(corpus: &[(String, String)]) -> Result<Bm25Index> {
        if corpus.is_empty() {
            return Err(Error::Contract("BM25 index over empty corpus".into()));
        }
        let mut docs = Vec::with_capacity(corpus.len());
        let mut doc_freq: BTreeMap<String, usize> = BTreeMap::new();
        let mut total_len = 0usize;
        for (id, source) in corpus {
            if docs.iter().any(|d: &Doc| d.id == *id) {
                return Err(Error::Contract(format!("duplicate document id {id}")));
            }
            let tokens = tokenize_program(source);
            let mut term_freq: BTreeMap<String, usize> = BTreeMap::new();
            for t in &tokens {
                *term_freq.entry(t.clone()).or_insert(0) += 1;
            }
            for term in term_freq.keys() {
                *doc_freq.entry(term.clone()).or_insert(0) += 1;
            }
            total_len += tokens.len();
            docs.push(Doc {
                id: id.clone(),
                term_freq,
                len: tokens.len(),
            });
        }
        let avg_len = total_len as f64 / docs.len() as f64;
        Ok(Bm25Index {
            docs,
            doc_freq,
            avg_len,
        })
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    fn idf(&self, term: &str) -> f64 {
        let n = self.docs.len() as f64;
        let df = self.doc_freq.get(term).copied().unwrap_or(0) as f64;
        ((n - df + 0.5) / (df + 0.5) + 1.0).ln()
    }

    fn score_doc(&self, doc: &Doc, query_tokens: &[String]) -> f64 {
        let mut score = 0.0;
        for term in query_tokens {
            let tf = doc.term_freq.get(term).copied().unwrap_or(0) as f64;
            if tf == 0.0 {
                continue;
            }
            let norm = K1 * (1.0 - B + B * doc.len as f64 / self.avg_len);
            score += self.idf(term) * tf * (K1 + 1.0) / (tf + norm);
        }
        score
    }

    /// Scores every document against the query, optionally excluding one id
    /// (leave-one-out), and returns (id, score) sorted by descending score
    /// with ascending id as the deterministic tie-break.
    pub fn query(&self, query_source: &str, exclude_id: Option<&str>) -> Vec<(String, f64)> {
        let tokens = tokenize_program(query_source);
        let mut scored: Vec<(String, f64)> = self
            .docs
            .iter()
            .filter(|d| exclude_id != Some(d.id.as_str()))
            .map(|d| (d.id.clone(), self.score_doc(d, &tokens)))
            .collect();
        scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
        scored
    }

    /// Best match under leave-one-out.
    pub fn nearest(&self, query_source: &str, exclude_id: &str) -> Option<(String, f64)> {
        self.query(query_source, Some(exclude_id)).into_iter().next()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenizer_splits_identifiers() {
        assert_eq!(
            tokenize_program("def make_palindrome(strVal):"),
            vec!["def", "make", "palindrome", "str", "val"]
        );
        assert_eq!(tokenize_program("fooBarBaz2x"), vec!["foo", "bar", "baz", "2", "x"]);
        assert_eq!(tokenize_program("__init__"), vec!["init"]);
        assert!(tokenize_program("  \n\t").is_empty());
    }

    /// Hand-computed oracle over a three-document toy corpus.
    ///
    /// Docs (after tokenization):
    ///   d1: "cat sat" -> [cat, sat]            len 2
    ///   d2: "cat cat ran" -> [cat, cat, ran]    len 3
    ///   d3: "dog ran far" -> [dog, ran, far]    len 3
    /// avg_len = 8/3.  N = 3.
    /// df: cat=2, sat=1, ran=2, dog=1, far=1.
    /// idf(cat) = ln((3-2+0.5)/(2+0.5)+1) = ln(1.6)
    /// idf(dog) = ln((3-1+0.5)/(1+0.5)+1) = ln(8/3)
    /// Query "cat dog" on d2:
    ///   tf(cat)=2, norm = 1.5*(0.25 + 0.75*3/(8/3)) = 1.5*(0.25+0.84375)
    ///        = 1.640625
    ///   term = ln(1.6)*2*2.5/(2+1.640625)
    /// Query on d3: tf(dog)=1, same norm, term = ln(8/3)*1*2.5/(1+1.640625)
    #[test]
    fn toy_corpus_scores_match_hand_computation() {
        let corpus = vec![
            ("d1".to_string(), "cat sat".to_string()),
            ("d2".to_string(), "cat cat ran".to_string()),
            ("d3".to_string(), "dog ran far".to_string()),
        ];
        let index = Bm25Index::build(&corpus).unwrap();
        let results = index.query("cat dog", None);
        let by_id: BTreeMap<&str, f64> =
            results.iter().map(|(id, s)| (id.as_str(), *s)).collect();

        let idf_cat = (1.6_f64).ln();
        let idf_dog = (8.0_f64 / 3.0).ln();
        let norm3 = 1.5 * (0.25 + 0.75 * 3.0 / (8.0 / 3.0));
        let norm2 = 1.5 * (0.25 + 0.75 * 2.0 / (8.0 / 3.0));

        let d1_expect = idf_cat * 1.0 * 2.5 / (1.0 + norm2);
        let d2_expect = idf_cat * 2.0 * 2.5 / (2.0 + norm3);
        let d3_expect = idf_dog * 1.0 * 2.5 / (1.0 + norm3);

        assert!((by_id["d1"] - d1_expect).abs() < 1e-9);
        assert!((by_id["d2"] - d2_expect).abs() < 1e-9);
        assert!((by_id["d3"] - d3_expect).abs() < 1e-9);
    }

    #[test]
    fn idf_non_negative_even_for_ubiquitous_terms() {
        let corpus = vec![
            ("a".to_string(), "token".to_string()),
            ("b".to_string(), "token".to_string()),
            ("c".to_string(), "token".to_string()),
        ];
        let index = Bm25Index::build(&corpus).unwrap();
        assert!(index.idf("token") > 0.0);
    }

    #[test]
    fn leave_one_out_excludes_self() {
        let corpus = vec![
            ("fib".to_string(), "def fib(n): return fib(n-1)+fib(n-2)".to_string()),
            (
                "fibfib".to_string(),
                "def fibfib(n): return fibfib(n-1)+fibfib(n-2)+fibfib(n-3)".to_string(),
            ),
            ("strlen".to_string(), "def strlen(s): return len(s)".to_string()),
        ];
        let index = Bm25Index::build(&corpus).unwrap();
        let (best, _) = index
            .nearest("def fib(n): return fib(n-1)+fib(n-2)", "fib")
            .unwrap();
        assert_eq!(best, "fibfib");
        let results = index.query("def fib(n): return 1", Some("fib"));
        assert!(results.iter().all(|(id, _)| id != "fib"));
    }

    #[test]
    fn duplicate_ids_rejected() {
        let corpus = vec![
            ("a".to_string(), "x".to_string()),
            ("a".to_string(), "y".to_string()),
        ];
        assert!(Bm25Index::build(&corpus).is_err());
        assert!(Bm25Index::build(&[]).is_err());
    }

    #[test]
    fn deterministic_tie_break_by_id() {
        let corpus = vec![
            ("b".to_string(), "same text".to_string()),
            ("a".to_string(), "same text".to_string()),
        ];
        let index = Bm25Index::build(&corpus).unwrap();
        let results = index.query("same", None);
        assert_eq!(results[0].0, "a");
        assert!((results[0].1 - results[1].1).abs() < 1e-12);
    }
}
