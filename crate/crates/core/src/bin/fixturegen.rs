//! Regenerates the replay-store fixture and its expected result files.
//!
//! Seeds `fixtures/replay_store.jsonl` with hand-designed completions for the
//! py-js direction (direct and exp variants, two samples per problem), then
//! runs both experiments against a scratch copy of that store and checks that
//! every executed status matches the plan below before freezing the outputs
//! under `fixtures/expected/`.

use c2c::corpus::{TranslationPair, build_pairs, load_corpus};
use c2c::experiment::{ExperimentConfig, load_trial, route_trials, run_experiment};
use c2c::gateway::{EndpointConfig, EndpointKind, SamplingConfig};
use c2c::lang::Language;
use c2c::metrics::conversion_matrix;
use c2c::postproc::ProfileTable;
use c2c::prompt::{
    PromptVariant, render_explanation_prompt, render_translation_prompt, sanitize_explanation,
};
use c2c::runner::StatusKind;
use c2c::store::{GenKey, GenRecord, GenerationStore, Stage, prompt_hash};
use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

/// Hand-designed samples for one problem: the explanation served at the
/// explain stage, and the raw completion text per (variant, sample index)
/// with the status it must produce after truncation and execution.
struct Plan {
    id: &'static str,
    explanation: &'static str,
    direct: [(&'static str, StatusKind); 2],
    exp: [(&'static str, StatusKind); 2],
}

/// Marker meaning "serve the canonical solution body" (always a Pass).
const CANON: &str = "<canonical>";

fn plan() -> Vec<Plan> {
    use StatusKind::*;
    vec![
        Plan {
            id: "HumanEval_53_add",
            explanation: "This function takes two integers and returns their sum.",
            direct: [(CANON, Pass), (CANON, Pass)],
            exp: [(CANON, Pass), ("  return x - y;\n}", AssertionError)],
        },
        Plan {
            id: "HumanEval_23_strlen",
            explanation: "This function returns the number of characters in the input string.",
            direct: [(CANON, Pass), (CANON, Pass)],
            exp: [(CANON, Pass), ("  return string.size();\n}", TypeError)],
        },
        Plan {
            id: "HumanEval_55_fib",
            explanation: "This function computes the n-th Fibonacci number iteratively, updating two accumulators n times and returning the first one.",
            direct: [(CANON, Pass), (CANON, Pass)],
            exp: [(CANON, Pass), (CANON, Pass)],
        },
        Plan {
            id: "HumanEval_63_fibfib",
            explanation: "This function computes the n-th term of a sequence where each term is the sum of the previous three terms, starting from 0, 0, 1.",
            direct: [
                (CANON, Pass),
                ("  throw new RangeError('not implemented');\n}", RuntimeError),
            ],
            exp: [(CANON, Pass), (CANON, Pass)],
        },
        Plan {
            id: "HumanEval_10_make_palindrome",
            explanation: "This function finds the shortest palindrome that begins with the input string by locating the longest palindromic suffix and appending the reverse of the prefix before it.",
            direct: [
                ("  return string + string;\n}", AssertionError),
                ("  return string +;\n}", OtherSyntaxError),
            ],
            exp: [(CANON, Pass), (CANON, Pass)],
        },
        Plan {
            id: "HumanEval_61_correct_bracketing",
            explanation: "This function checks whether every opening parenthesis has a matching closing parenthesis by tracking nesting depth, returning false if the depth ever goes negative and true only if it ends at zero.",
            direct: [(CANON, Pass), ("  return helper(brackets);\n}", UndeclaredError)],
            exp: [(CANON, Pass), ("  return true;\n}", AssertionError)],
        },
        Plan {
            id: "HumanEval_56_correct_bracketing",
            explanation: "This function checks whether a string of angle brackets is balanced by tracking nesting depth, returning false if the depth ever goes negative and true only if it ends at zero.",
            direct: [
                ("  return false;\n}", AssertionError),
                ("  return brackets.size();\n}", TypeError),
            ],
            exp: [(CANON, Pass), ("  * TODO: Your code here", Unhelpful)],
        },
        Plan {
            id: "HumanEval_24_largest_divisor",
            explanation: "This function returns the largest divisor of n that is smaller than n by scanning downward from n minus one.",
            direct: [(CANON, Pass), (CANON, Pass)],
            exp: [(CANON, Pass), (CANON, Pass)],
        },
        Plan {
            id: "HumanEval_27_flip_case",
            explanation: "This function converts lowercase characters to uppercase and uppercase characters to lowercase, leaving all other characters unchanged.",
            direct: [(CANON, Pass), ("  return string;\n}", AssertionError)],
            exp: [(CANON, Pass), (CANON, Pass)],
        },
        Plan {
            id: "HumanEval_45_triangle_area",
            explanation: "This function returns the area of a triangle given the base a and the height h, computed as a times h divided by two.",
            direct: [
                ("  return a * h;\n}", AssertionError),
                ("  return a + h;\n}", AssertionError),
            ],
            exp: [
                ("  return a * h / 3;\n}", AssertionError),
                ("  throw new RangeError('bad input');\n}", RuntimeError),
            ],
        },
    ]
}

fn record(key: GenKey, prompt_text: &str, text: &str) -> GenRecord {
    GenRecord {
        key,
        prompt_hash: prompt_hash(prompt_text),
        text: text.to_string(),
        token_logprobs: None,
        finish_reason: "stop".to_string(),
        model: "fixture".to_string(),
        timestamp: "2026-01-01T00:00:00Z".to_string(),
        pass_status: None,
    }
}

fn translate_key(pair: &TranslationPair, variant: PromptVariant, i: usize) -> GenKey {
    GenKey {
        id: pair.id.clone(),
        direction: "py-js".to_string(),
        variant: variant.id().to_string(),
        stage: Stage::Translate,
        sample_index: i,
    }
}

/// Raw completion served for one sample: the designed body (or the canonical
/// solution) followed by trailing junk that local stop enforcement must cut.
fn raw_completion(body: &str, canonical: &str) -> String {
    let body = if body == CANON { canonical } else { body };
    format!("{body}\n\nconsole.log('self test');")
}

fn seed_store(
    store: &GenerationStore,
    pairs: &[TranslationPair],
    plans: &[Plan],
    profiles: &ProfileTable,
    canonicals: &std::collections::BTreeMap<String, String>,
) -> c2c::error::Result<()> {
    for pair in pairs {
        let plan = plans
            .iter()
            .find(|p| p.id == pair.id)
            .unwrap_or_else(|| panic!("no plan for {}", pair.id));
        let canonical = canonicals
            .get(&pair.id)
            .unwrap_or_else(|| panic!("no canonical js solution for {}", pair.id));

        // direct variant: translation samples only
        let direct_prompt =
            render_translation_prompt(pair, PromptVariant::Direct, &[], None, profiles)?;
        for (i, (body, _)) in plan.direct.iter().enumerate() {
            store.append(record(
                translate_key(pair, PromptVariant::Direct, i),
                &direct_prompt.text,
                &raw_completion(body, canonical),
            ))?;
        }

        // exp variant: one explanation, then translation samples against the
        // prompt that embeds the sanitized explanation (mirrors the pipeline)
        let explain_prompt = render_explanation_prompt(pair, PromptVariant::Exp, &[])?;
        store.append(record(
            GenKey {
                id: pair.id.clone(),
                direction: "py-js".to_string(),
                variant: "exp".to_string(),
                stage: Stage::Explain,
                sample_index: 0,
            },
            &explain_prompt.text,
            plan.explanation,
        ))?;
        let sanitized = sanitize_explanation(plan.explanation, pair.target_language);
        let exp_prompt = render_translation_prompt(
            pair,
            PromptVariant::Exp,
            &[],
            Some(&sanitized),
            profiles,
        )?;
        for (i, (body, _)) in plan.exp.iter().enumerate() {
            store.append(record(
                translate_key(pair, PromptVariant::Exp, i),
                &exp_prompt.text,
                &raw_completion(body, canonical),
            ))?;
        }
    }
    Ok(())
}

/// Frozen prompt renderings: regression anchors for the template texts.
#[derive(serde::Serialize)]
struct PromptGolden {
    name: String,
    variant: String,
    stage: String,
    text: String,
}

fn prompt_goldens(
    pair: &TranslationPair,
    pair_jv: &TranslationPair,
    shot_path: &Path,
    profiles: &ProfileTable,
) -> Vec<PromptGolden> {
    let shot: c2c::prompt::ShotExample =
        serde_json::from_str(&fs::read_to_string(shot_path).expect("shot file"))
            .expect("shot parses");
    let mut out = Vec::new();
    let mut push = |name: &str, variant: PromptVariant, stage: &str, text: String| {
        out.push(PromptGolden {
            name: name.to_string(),
            variant: variant.id().to_string(),
            stage: stage.to_string(),
            text,
        });
    };
    push(
        "direct_zero_shot",
        PromptVariant::Direct,
        "translate",
        render_translation_prompt(pair, PromptVariant::Direct, &[], None, profiles)
            .expect("render")
            .text,
    );
    for variant in [PromptVariant::Exp, PromptVariant::ExpLbl, PromptVariant::ExpLblD] {
        push(
            &format!("{}_zero_shot", variant.id()),
            variant,
            "explain",
            render_explanation_prompt(pair, variant, &[]).expect("render").text,
        );
    }
    push(
        "exp_zero_shot",
        PromptVariant::Exp,
        "translate",
        render_translation_prompt(
            pair,
            PromptVariant::Exp,
            &[],
            Some("This function takes two integers and returns their sum."),
            profiles,
        )
        .expect("render")
        .text,
    );
    push(
        "exp_one_shot_java",
        PromptVariant::Exp,
        "translate",
        render_translation_prompt(
            pair_jv,
            PromptVariant::Exp,
            &[shot],
            Some("This function takes two integers and returns their sum."),
            profiles,
        )
        .expect("render")
        .text,
    );
    out
}

/// The py -> java pairing used by the shot-bearing prompt golden (java has no
/// mini-corpus entry because its toolchain is not installed here).
fn java_pair(pair: &TranslationPair) -> TranslationPair {
    TranslationPair {
        target_language: Language::Jv,
        target_scaffold: "import java.util.*;\nclass Problem {\n    public static long add(long x, long y) {\n".to_string(),
        target_tests: String::new(),
        ..pair.clone()
    }
}

fn config(corpus: &Path, variant: &str, store: &Path, run_root: &Path) -> ExperimentConfig {
    ExperimentConfig {
        corpus: corpus.to_path_buf(),
        directions: vec!["py-js".to_string()],
        variant: variant.to_string(),
        shots: vec![],
        sampling: SamplingConfig {
            n: 2,
            max_tokens: 512,
            ..SamplingConfig::default()
        },
        endpoint: EndpointConfig {
            kind: EndpointKind::Replay,
            url: None,
            model: None,
            api_key_env: "C2C_API_KEY".to_string(),
            max_parallel: 8,
            max_attempts: 5,
        },
        store: store.to_path_buf(),
        run_root: run_root.to_path_buf(),
        selective_threshold: None,
        seed: 7,
        max_problems: None,
    }
}

fn main() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..");
    let root = root.canonicalize().expect("repo root");
    let fixtures = root.join("fixtures");
    let corpus_path = fixtures.join("mini_corpus.jsonl");
    let store_path = fixtures.join("replay_store.jsonl");
    let expected_dir = fixtures.join("expected");

    let languages: BTreeSet<Language> = [Language::Py, Language::Js].into_iter().collect();
    let corpus = load_corpus(&corpus_path, &languages).expect("mini corpus loads");
    let (pairs, skips) = build_pairs(&corpus, Language::Py, Language::Js).expect("pairs");
    assert!(skips.is_empty(), "mini corpus must be two-sided: {skips:?}");
    assert_eq!(pairs.len(), 10, "expected 10 py-js pairs");

    let plans = plan();
    let profiles = ProfileTable::builtin().expect("profiles");
    let canonicals: std::collections::BTreeMap<String, String> = corpus
        .iter()
        .filter(|p| p.language == Language::Js)
        .filter_map(|p| Some((p.id.clone(), p.canonical_solution.clone()?)))
        .collect();

    if store_path.exists() {
        fs::remove_file(&store_path).expect("clear old store");
    }
    let store = GenerationStore::open(&store_path).expect("open store");
    seed_store(&store, &pairs, &plans, &profiles, &canonicals).expect("seed store");
    drop(store);

    // Run both variants against a scratch copy (runs re-append pass_status
    // lines; the checked-in fixture stays pristine).
    let scratch = tempfile::tempdir().expect("tempdir");
    let scratch_store = scratch.path().join("store.jsonl");
    fs::copy(&store_path, &scratch_store).expect("copy store");
    let run_root = scratch.path().join("runs");

    let direct_cfg = config(&corpus_path, "direct", &scratch_store, &run_root);
    let exp_cfg = config(&corpus_path, "exp", &scratch_store, &run_root);
    let direct_paths = run_experiment(&direct_cfg).expect("direct run");
    let exp_paths = run_experiment(&exp_cfg).expect("exp run");
    assert_eq!(direct_paths.len(), 1);
    assert_eq!(exp_paths.len(), 1);

    let direct = load_trial(&direct_paths[0]).expect("direct trial");
    let exp = load_trial(&exp_paths[0]).expect("exp trial");

    // Every executed status must match the hand-designed plan.
    for (trial, pick) in [
        (&direct, (|p: &Plan| p.direct) as fn(&Plan) -> [(&'static str, StatusKind); 2]),
        (&exp, |p: &Plan| p.exp),
    ] {
        for prob in &trial.problems {
            let plan = plans.iter().find(|p| p.id == prob.id).unwrap();
            let want: Vec<StatusKind> = pick(plan).iter().map(|(_, s)| *s).collect();
            assert_eq!(
                prob.statuses, want,
                "{} [{}]: got {:?}, planned {:?}",
                prob.id, trial.variant, prob.statuses, want
            );
        }
    }
    assert!((direct.pass_at_1 - 0.55).abs() < 1e-12, "direct pass@1 {}", direct.pass_at_1);
    assert!((exp.pass_at_1 - 0.70).abs() < 1e-12, "exp pass@1 {}", exp.pass_at_1);

    let routed = route_trials(&direct, &exp, 0.9).expect("routing");
    assert!((routed.pass_at_1 - 0.80).abs() < 1e-12, "routed pass@1 {}", routed.pass_at_1);

    let matrix = conversion_matrix(&direct.tally_map(), &exp.tally_map()).expect("matrix");
    let want_counts = [[7, 0, 0, 0], [2, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]];
    assert_eq!(matrix.counts, want_counts, "conversion matrix differs from plan");
    assert_eq!(matrix.shared_problems, 10);

    // frozen prompt renderings for one representative problem
    let add_pair = pairs
        .iter()
        .find(|p| p.id == "HumanEval_53_add")
        .expect("add pair");
    let goldens = prompt_goldens(
        add_pair,
        &java_pair(add_pair),
        &fixtures.join("shots/exp/humaneval_107_even_odd_palindrome.json"),
        &profiles,
    );
    fs::write(
        fixtures.join("prompt_goldens.json"),
        serde_json::to_string_pretty(&goldens).expect("goldens json"),
    )
    .expect("write prompt goldens");

    fs::create_dir_all(&expected_dir).expect("expected dir");
    fs::copy(&direct_paths[0], expected_dir.join("py-js_direct.result.json")).expect("copy");
    fs::copy(&exp_paths[0], expected_dir.join("py-js_exp.result.json")).expect("copy");
    fs::write(
        expected_dir.join("conversion_matrix.json"),
        serde_json::to_string_pretty(&matrix).expect("matrix json"),
    )
    .expect("write matrix");

    println!(
        "replay store: {} records; direct pass@1 {:.2}, exp pass@1 {:.2}, routed {:.2}",
        fs::read_to_string(&store_path).unwrap().lines().count(),
        direct.pass_at_1,
        exp.pass_at_1,
        routed.pass_at_1
    );
}
