//! End-to-end acceptance checks over the checked-in fixtures. Each test
//! covers one criterion and prints a single pass/fail line (visible with
//! `cargo test --test acceptance -- --nocapture`).

use c2c::ablate::{PerturbContext, PerturbationKind, perturb_explanation, split_units};
use c2c::corpus::{Problem, TranslationPair, build_pairs, load_corpus};
use c2c::experiment::{ExperimentConfig, load_trial, route_trials, run_experiment};
use c2c::gateway::{EndpointConfig, EndpointKind, Gateway, SamplingConfig};
use c2c::lang::Language;
use c2c::metrics::{ConversionMatrix, conversion_matrix, pass_at_k};
use c2c::obfuscate::{obfuscate_source, rename_in_tests};
use c2c::postproc::{ProfileTable, truncate_completion};
use c2c::prompt::{PromptVariant, RenderedPrompt, render_translation_prompt};
use c2c::retrieve::Bm25Index;
use c2c::runner::{RunnerTable, StatusKind, execute_candidate, execute_program};
use c2c::select::{
    SelectionCandidate, SelectionPolicy, compute_features, estimate_policy, select_explanation,
};
use c2c::store::{GenerationStore, Stage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::PathBuf;
use std::time::{Duration, Instant};

/// Fixture directory: next to the workspace root, overridable by env var.
fn fixtures_root() -> PathBuf {
    if let Ok(dir) = std::env::var("C2C_FIXTURES_DIR") {
        return PathBuf::from(dir);
    }
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// Runs one criterion body, prints its pass/fail line, and enforces the
/// wall-clock budget.
fn criterion(number: usize, name: &str, budget: Duration, body: impl FnOnce() + std::panic::UnwindSafe) {
    let start = Instant::now();
    let result = std::panic::catch_unwind(body);
    let elapsed = start.elapsed();
    let verdict = if result.is_ok() { "pass" } else { "FAIL" };
    println!("criterion {number:2} ({name}): {verdict} in {elapsed:.2?}");
    if let Err(cause) = result {
        std::panic::resume_unwind(cause);
    }
    assert!(
        elapsed <= budget,
        "criterion {number} exceeded its {budget:?} budget: {elapsed:?}"
    );
}

fn replay_endpoint() -> EndpointConfig {
    EndpointConfig {
        kind: EndpointKind::Replay,
        url: None,
        model: None,
        api_key_env: "C2C_API_KEY".to_string(),
        max_parallel: 8,
        max_attempts: 5,
    }
}

fn replay_config(variant: &str, store: &std::path::Path, run_root: &std::path::Path) -> ExperimentConfig {
    ExperimentConfig {
        corpus: fixtures_root().join("mini_corpus.jsonl"),
        directions: vec!["py-js".to_string()],
        variant: variant.to_string(),
        shots: vec![],
        sampling: SamplingConfig {
            n: 2,
            max_tokens: 512,
            ..SamplingConfig::default()
        },
        endpoint: replay_endpoint(),
        store: store.to_path_buf(),
        run_root: run_root.to_path_buf(),
        selective_threshold: None,
        seed: 7,
        max_problems: None,
    }
}

// ---------------------------------------------------------------------------
// 1. pass@k against a brute-force subset-enumeration oracle
// ---------------------------------------------------------------------------

/// Enumerates every k-subset of n samples (c of which pass) and counts the
/// fraction containing at least one passing sample. Exact for small n.
fn pass_at_k_bruteforce(n: usize, c: usize, k: usize) -> f64 {
    fn comb(n: u128, k: u128) -> u128 {
        if k > n {
            return 0;
        }
        let mut result: u128 = 1;
        for i in 0..k {
            result = result * (n - i) / (i + 1);
        }
        result
    }
    let total = comb(n as u128, k as u128);
    let all_fail = comb((n - c) as u128, k as u128);
    1.0 - all_fail as f64 / total as f64
}

#[test]
fn criterion_01_pass_at_k_matches_bruteforce() {
    criterion(1, "pass@k estimator", Duration::from_secs(1), || {
        for n in 1..=20 {
            for c in 0..=n {
                for k in 1..=n {
                    let fast = pass_at_k(n, c, k).unwrap();
                    let slow = pass_at_k_bruteforce(n, c, k);
                    assert!(
                        (fast - slow).abs() < 1e-9,
                        "n={n} c={c} k={k}: {fast} vs brute-force {slow}"
                    );
                }
            }
        }
        // degenerate and error cases
        assert_eq!(pass_at_k(20, 0, 1).unwrap(), 0.0);
        assert_eq!(pass_at_k(20, 20, 1).unwrap(), 1.0);
        assert!(pass_at_k(5, 6, 1).is_err());
        assert!(pass_at_k(5, 2, 6).is_err());
        assert!(pass_at_k(0, 0, 1).is_err());
    });
}

// ---------------------------------------------------------------------------
// 2. truncation goldens plus randomized idempotence/prefix fuzzing
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
struct TruncationGolden {
    language: Language,
    scaffold: String,
    input: String,
    output: String,
}

#[test]
fn criterion_02_truncation_goldens_and_fuzz() {
    criterion(2, "truncation", Duration::from_secs(10), || {
        let profiles = ProfileTable::builtin().unwrap();
        let raw = fs::read_to_string(fixtures_root().join("truncation_goldens.json")).unwrap();
        let goldens: Vec<TruncationGolden> = serde_json::from_str(&raw).unwrap();

        let mut per_language: BTreeMap<Language, usize> = BTreeMap::new();
        for g in &goldens {
            let profile = profiles.get(g.language).unwrap();
            let got = truncate_completion(&g.input, profile, &g.scaffold);
            assert_eq!(
                got, g.output,
                "golden mismatch for {} input {:?}",
                g.language.id(),
                g.input
            );
            *per_language.entry(g.language).or_insert(0) += 1;
        }
        for lang in Language::ALL {
            assert!(
                per_language.get(&lang).copied().unwrap_or(0) >= 3,
                "need at least 3 goldens for {}",
                lang.id()
            );
        }

        // fuzz: truncation is idempotent and only ever shortens its input
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let pieces = [
            "return x;", "}", "  }", "def f():", "#", "//", "(", ")", "end",
            "    x + y", "```", "sub f {", "echo hi", "console.log(1)",
            "public static void Main", "func", "\t", " ",
        ];
        for lang in Language::ALL {
            let profile = profiles.get(lang).unwrap();
            for _ in 0..1000 {
                let lines = rng.gen_range(0..8);
                let mut text = String::new();
                for _ in 0..lines {
                    text.push_str(pieces[rng.gen_range(0..pieces.len())]);
                    text.push('\n');
                }
                if rng.gen_bool(0.5) {
                    text.push_str(pieces[rng.gen_range(0..pieces.len())]);
                }
                let scaffold = "(define (candidate n)\n";
                let once = truncate_completion(&text, profile, scaffold);
                let twice = truncate_completion(&once, profile, scaffold);
                assert_eq!(once, twice, "{}: not idempotent on {text:?}", lang.id());
                assert!(
                    text.starts_with(&once),
                    "{}: output is not a prefix of input: {text:?} -> {once:?}",
                    lang.id()
                );
            }
        }
    });
}

// ---------------------------------------------------------------------------
// 3. corpus selfcheck and broken-seed classification
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
struct BrokenSeed {
    language: Language,
    label: String,
    scaffold: String,
    body: String,
    tests: String,
}

fn status_from_label(label: &str) -> StatusKind {
    match label {
        "pass" => StatusKind::Pass,
        "type_error" => StatusKind::TypeError,
        "undeclared_error" => StatusKind::UndeclaredError,
        "assertion_error" => StatusKind::AssertionError,
        "runtime_error" => StatusKind::RuntimeError,
        "other_syntax_error" => StatusKind::OtherSyntaxError,
        "unhelpful" => StatusKind::Unhelpful,
        "timeout" => StatusKind::Timeout,
        other => panic!("unknown status label {other:?}"),
    }
}

fn mini_corpus(languages: &[Language]) -> Vec<Problem> {
    let set: BTreeSet<Language> = languages.iter().copied().collect();
    load_corpus(&fixtures_root().join("mini_corpus.jsonl"), &set).unwrap()
}

#[test]
fn criterion_03_selfcheck_and_error_classification() {
    criterion(3, "selfcheck + broken seeds", Duration::from_secs(120), || {
        let runners = RunnerTable::builtin().unwrap();
        let profiles = ProfileTable::builtin().unwrap();
        let fixture_langs = [Language::Py, Language::Js, Language::Ts, Language::Pl];
        for lang in fixture_langs {
            assert!(
                runners.get(lang).unwrap().toolchain_available(),
                "{} toolchain missing; fixtures require it",
                lang.id()
            );
        }

        // every canonical solution passes its own unit tests
        let corpus = mini_corpus(&fixture_langs);
        assert_eq!(corpus.len(), 40, "expected 10 problems x 4 languages");
        for problem in &corpus {
            let program = format!("{}\n{}", problem.full_program().unwrap(), problem.tests);
            let spec = runners.get(problem.language).unwrap();
            let outcome = execute_program(&program, spec).unwrap();
            assert_eq!(
                outcome.status,
                StatusKind::Pass,
                "{} [{}]: {}\n{}",
                problem.id,
                problem.language.id(),
                outcome.stdout,
                outcome.stderr
            );
        }

        // every broken seed classifies to its label
        let raw = fs::read_to_string(fixtures_root().join("broken_seeds.jsonl")).unwrap();
        let mut covered: BTreeMap<Language, BTreeSet<StatusKind>> = BTreeMap::new();
        let mut count = 0;
        for line in raw.lines().filter(|l| !l.trim().is_empty()) {
            let seed: BrokenSeed = serde_json::from_str(line).unwrap();
            let want = status_from_label(&seed.label);
            let pair = TranslationPair {
                id: format!("seed-{}-{}", seed.language.id(), seed.label),
                source_language: Language::Py,
                target_language: seed.language,
                source_program: "def f(x):\n    return x\n".to_string(),
                target_scaffold: seed.scaffold.clone(),
                target_tests: seed.tests.clone(),
            };
            let spec = runners.get(seed.language).unwrap();
            let profile = profiles.get(seed.language).unwrap();
            let outcome = execute_candidate(&pair, &seed.body, spec, Some(profile)).unwrap();
            assert_eq!(
                outcome.status,
                want,
                "seed {} [{}]: {}\n{}",
                seed.label,
                seed.language.id(),
                outcome.stdout,
                outcome.stderr
            );
            covered.entry(seed.language).or_default().insert(want);
            count += 1;
        }
        assert!(count >= 20, "expected at least 5 seeds per language, got {count}");
        for (lang, kinds) in &covered {
            assert_eq!(
                kinds.len(),
                6,
                "{} seeds must cover all six error types, got {kinds:?}",
                lang.id()
            );
        }
    });
}

// ---------------------------------------------------------------------------
// 4. deterministic replay of the full two-variant experiment
// ---------------------------------------------------------------------------

fn trial_value(path: &std::path::Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn criterion_04_replay_experiment_end_to_end() {
    criterion(4, "replay experiment", Duration::from_secs(60), || {
        let fixtures = fixtures_root();
        let scratch = tempfile::tempdir().unwrap();
        let store = scratch.path().join("store.jsonl");
        fs::copy(fixtures.join("replay_store.jsonl"), &store).unwrap();
        let run_root = scratch.path().join("runs");

        let direct_cfg = replay_config("direct", &store, &run_root);
        let exp_cfg = replay_config("exp", &store, &run_root);

        // first full run
        let direct_paths = run_experiment(&direct_cfg).unwrap();
        let exp_paths = run_experiment(&exp_cfg).unwrap();
        assert_eq!(direct_paths.len(), 1);
        assert_eq!(exp_paths.len(), 1);
        let expected_direct = trial_value(&fixtures.join("expected/py-js_direct.result.json"));
        let expected_exp = trial_value(&fixtures.join("expected/py-js_exp.result.json"));
        assert_eq!(trial_value(&direct_paths[0]), expected_direct);
        assert_eq!(trial_value(&exp_paths[0]), expected_exp);

        // conversion matrix reproduces the frozen one
        let direct = load_trial(&direct_paths[0]).unwrap();
        let exp = load_trial(&exp_paths[0]).unwrap();
        let matrix = conversion_matrix(&direct.tally_map(), &exp.tally_map()).unwrap();
        let frozen: ConversionMatrix = serde_json::from_str(
            &fs::read_to_string(fixtures.join("expected/conversion_matrix.json")).unwrap(),
        )
        .unwrap();
        assert_eq!(matrix, frozen);

        // second run over the same artifacts is a no-op with identical output
        let direct_bytes = fs::read(&direct_paths[0]).unwrap();
        let again = run_experiment(&direct_cfg).unwrap();
        assert_eq!(again, direct_paths);
        assert_eq!(fs::read(&direct_paths[0]).unwrap(), direct_bytes);

        // interrupted run (budget of 4 problems), then restart to completion
        let scratch2 = tempfile::tempdir().unwrap();
        let store2 = scratch2.path().join("store.jsonl");
        fs::copy(fixtures.join("replay_store.jsonl"), &store2).unwrap();
        let run_root2 = scratch2.path().join("runs");
        let mut partial_cfg = replay_config("exp", &store2, &run_root2);
        partial_cfg.max_problems = Some(4);
        let partial = run_experiment(&partial_cfg).unwrap();
        assert!(partial.is_empty(), "interrupted run must not emit a result file");
        let progress = run_root2
            .join(partial_cfg.config_hash())
            .join("py-js_exp.progress.jsonl");
        assert_eq!(fs::read_to_string(&progress).unwrap().lines().count(), 4);

        partial_cfg.max_problems = None;
        let resumed = run_experiment(&partial_cfg).unwrap();
        assert_eq!(resumed.len(), 1);
        assert_eq!(trial_value(&resumed[0]), expected_exp);
    });
}

// ---------------------------------------------------------------------------
// 5. explanation selection policies on a synthetic train set
// ---------------------------------------------------------------------------

#[test]
fn criterion_05_selection_policies() {
    criterion(5, "selection policies", Duration::from_secs(5), || {
        // hand-counted feature fixtures
        let src = "def fib(n):\n    if n < 2:\n        return n\n    return fib(n-1) + fib(n-2)\n";
        let cases: [(&str, usize, usize, usize); 4] = [
            // (explanation, lines_explained, line_count, frag_count)
            ("This computes `fib` recursively using `n`.", 0, 1, 2),
            ("if n < 2:\nBase case.\nreturn n\nReturns n itself.", 2, 4, 0),
            ("", 0, 0, 0),
            ("```py\nif n < 2:\n```\nFenced quote plus `one` span.", 1, 4, 1),
        ];
        for (text, lines_explained, line_count, frag_count) in cases {
            let f = compute_features(text, src);
            assert_eq!(f.lines_explained, lines_explained, "lines_explained for {text:?}");
            assert_eq!(f.line_count, line_count, "line_count for {text:?}");
            assert_eq!(f.frag_count, frag_count, "frag_count for {text:?}");
            assert_eq!(
                f.len_chars_excl_code,
                c2c::metrics::strip_code(text).chars().count()
            );
        }

        // synthetic 50-problem x 20-candidate train set
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut train: BTreeMap<String, Vec<SelectionCandidate>> = BTreeMap::new();
        for p in 0..50 {
            let cands: Vec<SelectionCandidate> = (0..20)
                .map(|i| {
                    let mut c = SelectionCandidate::new(format!("explanation {i}"), i, "");
                    c.pass_estimate = Some(rng.gen_range(0..=10) as f64 / 10.0);
                    c.features.len_chars_excl_code = rng.gen_range(0..400);
                    c.features.lines_explained = rng.gen_range(0..8);
                    c.features.line_count = rng.gen_range(0..25);
                    c.features.frag_count = rng.gen_range(0..12);
                    c.logp_code_given_exp = Some((-rng.gen_range(1.0..60.0), 12));
                    c.logp_exp_given_code = Some((-rng.gen_range(1.0..60.0), 25));
                    c
                })
                .collect();
            train.insert(format!("problem_{p:02}"), cands);
        }

        let oracle = estimate_policy(&train, SelectionPolicy::Oracle).unwrap();
        assert_eq!(oracle.variance, 0.0);
        for policy in [
            SelectionPolicy::Len,
            SelectionPolicy::LineE,
            SelectionPolicy::Line,
            SelectionPolicy::Frag,
            SelectionPolicy::LogProb { alpha: 0.5 },
            SelectionPolicy::Random { seed: 17 },
        ] {
            let est = estimate_policy(&train, policy).unwrap();
            assert!(
                oracle.mean >= est.mean - 1e-12,
                "{policy:?} beat the oracle: {} > {}",
                est.mean,
                oracle.mean
            );
        }

        // random policy: mean within 3 sigma of the analytic expectation
        let est = estimate_policy(&train, SelectionPolicy::Random { seed: 5 }).unwrap();
        let analytic: f64 = train
            .values()
            .map(|cs| cs.iter().map(|c| c.pass_estimate.unwrap()).sum::<f64>() / cs.len() as f64)
            .sum::<f64>()
            / train.len() as f64;
        let sigma = est.variance.sqrt().max(1e-9);
        assert!(
            (est.mean - analytic).abs() <= 3.0 * sigma,
            "random mean {} vs analytic {analytic} (sigma {sigma})",
            est.mean
        );

        // logprob re-ranking is invariant to token-count scaling
        let cands = train.values().next().unwrap();
        let policy = SelectionPolicy::LogProb { alpha: 0.3 };
        let before = select_explanation(cands, policy).unwrap().sample_index;
        let scaled: Vec<SelectionCandidate> = cands
            .iter()
            .map(|c| {
                let mut c = c.clone();
                let (a, na) = c.logp_code_given_exp.unwrap();
                let (b, nb) = c.logp_exp_given_code.unwrap();
                c.logp_code_given_exp = Some((a * 7.0, na * 7));
                c.logp_exp_given_code = Some((b * 7.0, nb * 7));
                c
            })
            .collect();
        let after = select_explanation(&scaled, policy).unwrap().sample_index;
        assert_eq!(before, after);
    });
}

// ---------------------------------------------------------------------------
// 6. difficulty-based routing beats both unrouted variants
// ---------------------------------------------------------------------------

#[test]
fn criterion_06_selective_routing() {
    criterion(6, "selective routing", Duration::from_secs(5), || {
        let fixtures = fixtures_root();
        let direct = load_trial(fixtures.join("expected/py-js_direct.result.json")).unwrap();
        let exp = load_trial(fixtures.join("expected/py-js_exp.result.json")).unwrap();
        let routed = route_trials(&direct, &exp, 0.9).unwrap();
        assert!(
            routed.pass_at_1 >= direct.pass_at_1.max(exp.pass_at_1),
            "routed {} < max({}, {})",
            routed.pass_at_1,
            direct.pass_at_1,
            exp.pass_at_1
        );
        assert!((direct.pass_at_1 - 0.55).abs() < 1e-12);
        assert!((exp.pass_at_1 - 0.70).abs() < 1e-12);
        assert!((routed.pass_at_1 - 0.80).abs() < 1e-12);
    });
}

// ---------------------------------------------------------------------------
// 7. BM25 retrieval: hand-computed scores and near-duplicate neighbors
// ---------------------------------------------------------------------------

#[test]
fn criterion_07_bm25_retrieval() {
    criterion(7, "BM25 retrieval", Duration::from_secs(1), || {
        // toy corpus with fully hand-computed BM25 scores
        // d1: [cat, sat]  d2: [cat, cat, ran]  d3: [dog, ran, far]
        // N=3, avg_len=8/3, df(cat)=2, df(dog)=1
        let corpus = vec![
            ("d1".to_string(), "cat sat".to_string()),
            ("d2".to_string(), "cat cat ran".to_string()),
            ("d3".to_string(), "dog ran far".to_string()),
        ];
        let index = Bm25Index::build(&corpus).unwrap();
        let results = index.query("cat dog", None);
        let by_id: BTreeMap<&str, f64> = results.iter().map(|(i, s)| (i.as_str(), *s)).collect();

        let k1 = 1.5;
        let b = 0.75;
        let avg = 8.0 / 3.0;
        let idf_cat = ((3.0 - 2.0 + 0.5) / (2.0 + 0.5) + 1.0_f64).ln();
        let idf_dog = ((3.0 - 1.0 + 0.5) / (1.0 + 0.5) + 1.0_f64).ln();
        let norm = |len: f64| k1 * (1.0 - b + b * len / avg);
        let d1 = idf_cat * 1.0 * (k1 + 1.0) / (1.0 + norm(2.0));
        let d2 = idf_cat * 2.0 * (k1 + 1.0) / (2.0 + norm(3.0));
        let d3 = idf_dog * 1.0 * (k1 + 1.0) / (1.0 + norm(3.0));
        assert!((by_id["d1"] - d1).abs() < 1e-9, "d1 {} vs {d1}", by_id["d1"]);
        assert!((by_id["d2"] - d2).abs() < 1e-9, "d2 {} vs {d2}", by_id["d2"]);
        assert!((by_id["d3"] - d3).abs() < 1e-9, "d3 {} vs {d3}", by_id["d3"]);

        // leave-one-out on the mini corpus pairs up the near-duplicates
        let corpus = mini_corpus(&[Language::Py]);
        let docs: Vec<(String, String)> = corpus
            .iter()
            .map(|p| (p.id.clone(), p.full_program().unwrap()))
            .collect();
        let index = Bm25Index::build(&docs).unwrap();
        let by_id: BTreeMap<&str, &str> = docs.iter().map(|(i, s)| (i.as_str(), s.as_str())).collect();
        for (query, want) in [
            ("HumanEval_55_fib", "HumanEval_63_fibfib"),
            ("HumanEval_63_fibfib", "HumanEval_55_fib"),
            ("HumanEval_61_correct_bracketing", "HumanEval_56_correct_bracketing"),
            ("HumanEval_56_correct_bracketing", "HumanEval_61_correct_bracketing"),
        ] {
            let (nearest, score) = index.nearest(by_id[query], query).unwrap();
            assert_eq!(nearest, want, "nearest({query}) scored {score}");
        }
    });
}

// ---------------------------------------------------------------------------
// 8. identifier obfuscation preserves execution status
// ---------------------------------------------------------------------------

#[test]
fn criterion_08_obfuscation_preserves_status() {
    criterion(8, "obfuscation", Duration::from_secs(30), || {
        let runners = RunnerTable::builtin().unwrap();
        let spec = runners.get(Language::Py).unwrap();
        let corpus = mini_corpus(&[Language::Py]);
        assert_eq!(corpus.len(), 10);

        for problem in &corpus {
            let original = problem.full_program().unwrap();
            let baseline = execute_program(&format!("{original}\n{}", problem.tests), spec)
                .unwrap()
                .status;
            let (obfuscated, map) = obfuscate_source(&original, Language::Py).unwrap();
            assert!(!map.function_renames.is_empty(), "{}: entry not renamed", problem.id);
            let tests = rename_in_tests(&problem.tests, &map);
            let after = execute_program(&format!("{obfuscated}\n{tests}"), spec)
                .unwrap()
                .status;
            assert_eq!(baseline, after, "{}: status changed under obfuscation", problem.id);
        }

        // failing programs keep their failure status too
        let broken = "def f(x: int) -> int:\n    return x + 2\n";
        let tests = "assert f(1) == 2\n";
        let before = execute_program(&format!("{broken}\n{tests}"), spec).unwrap().status;
        assert_eq!(before, StatusKind::AssertionError);
        let (obf, map) = obfuscate_source(broken, Language::Py).unwrap();
        let after = execute_program(&format!("{obf}\n{}", rename_in_tests(tests, &map)), spec)
            .unwrap()
            .status;
        assert_eq!(after, StatusKind::AssertionError);

        // canonical rename map for the palindrome example
        let pal = corpus
            .iter()
            .find(|p| p.id == "HumanEval_10_make_palindrome")
            .unwrap();
        let (_, map) = obfuscate_source(&pal.full_program().unwrap(), Language::Py).unwrap();
        assert_eq!(map.entry_rename("make_palindrome"), Some("FUNC_0"));
        let vars: BTreeMap<&str, &str> = map
            .variable_renames
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        assert_eq!(vars.get("string"), Some(&"VAR_0"));
        assert_eq!(vars.get("beginning_of_suffix"), Some(&"VAR_1"));
    });
}

// ---------------------------------------------------------------------------
// 9. explanation perturbations: determinism and exact deletion counts
// ---------------------------------------------------------------------------

#[test]
fn criterion_09_perturbations() {
    criterion(9, "perturbations", Duration::from_secs(5), || {
        let explanations: BTreeMap<String, String> = BTreeMap::from([
            ("own".to_string(), "Own explanation.".to_string()),
            ("other_a".to_string(), "First other explanation.".to_string()),
            ("other_b".to_string(), "Second other explanation.".to_string()),
        ]);
        let ctx = PerturbContext {
            variant: PromptVariant::Exp,
            problem_id: "own",
            corpus_explanations: &explanations,
            retrieval_index: None,
            source_program: "def f(x): return x",
            obfuscated_explanation: None,
        };

        let mut rng = ChaCha8Rng::seed_from_u64(777);
        for case in 0..200u64 {
            let word_count = rng.gen_range(1..=40);
            let words: Vec<String> = (0..word_count).map(|i| format!("word{i}")).collect();
            let sentence_count = rng.gen_range(1..=12);
            let sentences: Vec<String> =
                (0..sentence_count).map(|i| format!("Sentence number {i}.")).collect();
            let word_text = words.join(" ");
            let sentence_text = sentences.join(" ");
            let p: f64 = rng.gen_range(0.05..0.95);

            // word deletion removes exactly ceil(p * count), order-preserving
            let out =
                perturb_explanation(&word_text, PerturbationKind::DelW { p }, case, &ctx).unwrap();
            let kept: Vec<&str> = out.split_whitespace().collect();
            let removed = ((p * word_count as f64).ceil() as usize).min(word_count);
            assert_eq!(kept.len(), word_count - removed, "case {case}: DelW count");
            let indices: Vec<usize> = kept.iter().map(|w| w[4..].parse().unwrap()).collect();
            assert!(indices.windows(2).all(|w| w[0] < w[1]), "case {case}: DelW order");
            let again =
                perturb_explanation(&word_text, PerturbationKind::DelW { p }, case, &ctx).unwrap();
            assert_eq!(out, again, "case {case}: DelW determinism");

            // sentence deletion removes exactly ceil(p * count)
            let out =
                perturb_explanation(&sentence_text, PerturbationKind::DelS { p }, case, &ctx)
                    .unwrap();
            let kept = split_units(&out, PromptVariant::Exp).len();
            let removed = ((p * sentence_count as f64).ceil() as usize).min(sentence_count);
            assert_eq!(kept, sentence_count - removed, "case {case}: DelS count");

            // shuffling is deterministic and preserves the sentence multiset
            let a = perturb_explanation(&sentence_text, PerturbationKind::SwapS, case, &ctx)
                .unwrap();
            let b = perturb_explanation(&sentence_text, PerturbationKind::SwapS, case, &ctx)
                .unwrap();
            assert_eq!(a, b, "case {case}: SwapS determinism");
            let mut got = split_units(&a, PromptVariant::Exp);
            got.sort();
            let mut want = sentences.clone();
            want.sort();
            assert_eq!(got, want, "case {case}: SwapS multiset");

            // substitution never picks the problem's own explanation
            let out = perturb_explanation("x", PerturbationKind::RandExp, case, &ctx).unwrap();
            assert_ne!(out, "Own explanation.", "case {case}: RandExp own pick");
        }

        assert_eq!(
            perturb_explanation("anything", PerturbationKind::NoExp, 0, &ctx).unwrap(),
            ""
        );
        assert!(perturb_explanation("x", PerturbationKind::DelW { p: 0.0 }, 0, &ctx).is_err());
        assert!(perturb_explanation("x", PerturbationKind::DelW { p: 1.0 }, 0, &ctx).is_err());
    });
}

// ---------------------------------------------------------------------------
// 10. live endpoint smoke test (opt-in via environment)
// ---------------------------------------------------------------------------

#[test]
fn criterion_10_live_endpoint_smoke() {
    criterion(10, "live endpoint smoke", Duration::from_secs(300), || {
        let (Ok(url), Ok(model)) = (std::env::var("C2C_LIVE_URL"), std::env::var("C2C_LIVE_MODEL"))
        else {
            println!("criterion 10: skipped (set C2C_LIVE_URL and C2C_LIVE_MODEL to enable)");
            return;
        };
        let gateway = Gateway::new(EndpointConfig {
            kind: EndpointKind::Live,
            url: Some(url),
            model: Some(model),
            ..replay_endpoint()
        })
        .unwrap();
        let profiles = ProfileTable::builtin().unwrap();
        let corpus = mini_corpus(&[Language::Py, Language::Js]);
        let (pairs, _) = build_pairs(&corpus, Language::Py, Language::Js).unwrap();
        let pair = &pairs[0];
        let prompt: RenderedPrompt =
            render_translation_prompt(pair, PromptVariant::Direct, &[], None, &profiles).unwrap();
        let scratch = tempfile::tempdir().unwrap();
        let store = GenerationStore::open(scratch.path().join("live.jsonl")).unwrap();
        let cfg = SamplingConfig {
            n: 1,
            stop: prompt.stop_sequences.clone(),
            ..SamplingConfig::default()
        };
        let out = gateway
            .complete(&prompt, &cfg, &store, &pair.id, "py-js", "direct")
            .unwrap();
        assert_eq!(out.len(), 1);
        assert!(!out[0].text.is_empty(), "live endpoint returned an empty completion");
        assert_eq!(store.find(&pair.id, "py-js", "direct", Stage::Translate).len(), 1);
    });
}
