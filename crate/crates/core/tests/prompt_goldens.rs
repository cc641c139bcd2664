//! Frozen-prompt regression test: re-renders each golden from the mini corpus
//! and the bundled shot file, and compares against the checked-in text.

use c2c::corpus::{TranslationPair, build_pairs, load_corpus};
use c2c::lang::Language;
use c2c::postproc::ProfileTable;
use c2c::prompt::{
    PromptVariant, ShotExample, render_explanation_prompt, render_translation_prompt,
};
use serde::Deserialize;
use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;

#[derive(Debug, Deserialize)]
struct PromptGolden {
    name: String,
    variant: String,
    stage: String,
    text: String,
}

fn fixtures_root() -> PathBuf {
    if let Ok(dir) = std::env::var("C2C_FIXTURES_DIR") {
        return PathBuf::from(dir);
    }
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

#[test]
fn rendered_prompts_match_frozen_goldens() {
    let fixtures = fixtures_root();
    let languages: BTreeSet<Language> = [Language::Py, Language::Js].into_iter().collect();
    let corpus = load_corpus(&fixtures.join("mini_corpus.jsonl"), &languages).unwrap();
    let (pairs, _) = build_pairs(&corpus, Language::Py, Language::Js).unwrap();
    let pair = pairs.iter().find(|p| p.id == "HumanEval_53_add").unwrap();
    let pair_jv = TranslationPair {
        target_language: Language::Jv,
        target_scaffold: "import java.util.*;\nclass Problem {\n    public static long add(long x, long y) {\n".to_string(),
        target_tests: String::new(),
        ..pair.clone()
    };
    let profiles = ProfileTable::builtin().unwrap();
    let shot: ShotExample = serde_json::from_str(
        &fs::read_to_string(fixtures.join("shots/exp/humaneval_107_even_odd_palindrome.json"))
            .unwrap(),
    )
    .unwrap();
    let explanation = "This function takes two integers and returns their sum.";

    let goldens: Vec<PromptGolden> =
        serde_json::from_str(&fs::read_to_string(fixtures.join("prompt_goldens.json")).unwrap())
            .unwrap();
    assert_eq!(goldens.len(), 6);

    for golden in &goldens {
        let variant: PromptVariant = golden.variant.parse().unwrap();
        let rendered = match (golden.name.as_str(), golden.stage.as_str()) {
            (_, "explain") => render_explanation_prompt(pair, variant, &[]).unwrap(),
            ("direct_zero_shot", _) => {
                render_translation_prompt(pair, variant, &[], None, &profiles).unwrap()
            }
            ("exp_zero_shot", _) => {
                render_translation_prompt(pair, variant, &[], Some(explanation), &profiles)
                    .unwrap()
            }
            ("exp_one_shot_java", _) => render_translation_prompt(
                &pair_jv,
                variant,
                std::slice::from_ref(&shot),
                Some(explanation),
                &profiles,
            )
            .unwrap(),
            other => panic!("unknown golden {other:?}"),
        };
        assert_eq!(
            rendered.text, golden.text,
            "prompt golden {} drifted from the frozen rendering",
            golden.name
        );
    }

    // every bundled shot file parses and carries an explanation
    for variant_dir in ["exp", "exp_lbl", "exp_lbl_d"] {
        let dir = fixtures.join("shots").join(variant_dir);
        let mut count = 0;
        for entry in fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            let shot: ShotExample =
                serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
            assert!(shot.explanation.is_some(), "{path:?} lacks an explanation");
            assert!(!shot.source_program.trim().is_empty());
            assert!(!shot.target_solution.trim().is_empty());
            count += 1;
        }
        assert_eq!(count, 4, "expected four shot files in {variant_dir}");
    }
}
