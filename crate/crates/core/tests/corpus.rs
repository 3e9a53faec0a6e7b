//! Checks over every scene in the corpus: invariants, Gröbner termination,
//! and the shape of the emitted documents.

use std::path::PathBuf;

use serde_json::Value;
use spencerlab::cli::{self, Along, CertifyComplex, Command, SceneFile, SpencerModule};
use spencerlab::groebner::{buchberger, MonomialOrder, QuotientDimension};
use spencerlab::invariants::{jacobian_smoothness, milnor_tjurina, spencer_h0};

fn corpus() -> Vec<SceneFile> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "scene"))
        .collect();
    paths.sort();
    paths.iter().map(|p| cli::load_scene(p).unwrap()).collect()
}

fn is_int_key(k: &str) -> bool {
    k.parse::<i64>().is_ok()
}

/// `{index: {weight: count}}` with integer string keys and counts >= `min`.
fn check_table(v: &Value, min: u64) -> Result<(), String> {
    let rows = v.as_object().ok_or("table is not an object")?;
    for (i, row) in rows {
        if !is_int_key(i) {
            return Err(format!("index key {i}"));
        }
        for (d, n) in row.as_object().ok_or("row is not an object")? {
            if !is_int_key(d) {
                return Err(format!("weight key {d}"));
            }
            if n.as_u64().is_none_or(|n| n < min) {
                return Err(format!("entry {i}/{d} = {n}"));
            }
        }
    }
    Ok(())
}

/// Mirrors `schema/output.schema.json`.
fn validate(doc: &Value) -> Result<(), String> {
    let obj = doc.as_object().ok_or("document is not an object")?;
    for key in ["command", "scene", "degree_bound", "tables", "certificate", "limits"] {
        if !obj.contains_key(key) {
            return Err(format!("missing {key}"));
        }
    }
    if !doc["degree_bound"].is_u64() {
        return Err("degree_bound".into());
    }
    if let Some(scene) = doc["scene"].as_object() {
        for key in ["name", "variables", "weights", "ideal"] {
            if !scene.contains_key(key) {
                return Err(format!("scene.{key}"));
            }
        }
    } else if !doc["scene"].is_null() {
        return Err("scene".into());
    }
    check_table(&doc["tables"], 1)?;
    if !doc["certificate"].is_object() {
        return Err("certificate".into());
    }
    let limits = doc["limits"].as_object().ok_or("limits")?;
    for key in ["lim", "lim1", "stable_from"] {
        if let Some(t) = limits.get(key) {
            check_table(t, 0)?;
        }
    }
    Ok(())
}

#[test]
fn corpus_is_large_enough() {
    assert!(corpus().len() >= 12);
}

#[test]
fn groebner_terminates_within_budget() {
    for f in corpus() {
        let ideal = f.scene.ideal();
        if ideal.generators().is_empty() {
            continue;
        }
        for order in [MonomialOrder::WeightedDegRevLex, MonomialOrder::Lex] {
            buchberger(ideal, order).unwrap_or_else(|e| panic!("{}: {e}", f.name));
        }
    }
}

#[test]
fn milnor_equals_tjurina_on_isolated_hypersurfaces() {
    let mut seen = 0;
    for f in corpus() {
        let [g] = f.scene.ideal().generators() else { continue };
        let mt = milnor_tjurina(g).unwrap();
        if let QuotientDimension::Finite { .. } = mt.mu {
            assert_eq!(mt.mu.dim(), mt.tau.dim(), "{}", f.name);
            seen += 1;
        }
    }
    assert!(seen >= 3);
}

/// A smooth graded scene is a linear subspace A^m. For m >= 1 some constant
/// field is tangent, so alpha is the unit ideal; for m = 0 there are no
/// derivations and the quotient is the residue field in weight 0.
#[test]
fn smooth_scenes_have_zero_spencer_h0() {
    let mut seen = 0;
    for f in corpus() {
        if !jacobian_smoothness(&f.scene).unwrap().smooth {
            continue;
        }
        let h0 = spencer_h0(&f.scene, 8).unwrap();
        let n = f.scene.ring().nvars();
        let codim = f.scene.ideal().generators().len();
        let nonzero: Vec<(i64, usize)> = h0.table.iter().filter(|(_, v)| **v > 0).map(|(d, v)| (*d, *v)).collect();
        if codim == n {
            assert_eq!(nonzero, vec![(0, 1)], "{}", f.name);
        } else {
            assert!(nonzero.is_empty(), "{}: {:?}", f.name, h0.table);
            seen += 1;
        }
    }
    assert!(seen >= 6);
}

#[test]
fn documents_match_schema_and_are_deterministic() {
    let commands = [
        Command::DeRham,
        Command::Jet { r: 1 },
        Command::Koszul { elements: None },
        Command::Kashiwara { p: 2 },
        Command::SpencerH0,
        Command::Smooth,
        Command::Complete { along: Along::SelfIdeal, r_max: None },
        Command::DerivedComplete { along: Along::Variables, r_max: Some(6) },
    ];
    for f in corpus() {
        let small = f.scene.ring().nvars() <= 2;
        for cmd in &commands {
            if matches!(cmd, Command::Jet { .. }) && !small {
                continue;
            }
            let doc = cli::run(cmd, Some(&f), 4).unwrap_or_else(|e| panic!("{} {}: {e}", f.name, cmd.name()));
            validate(&doc).unwrap_or_else(|e| panic!("{} {}: {e}", f.name, cmd.name()));
            let again = cli::run(cmd, Some(&f), 4).unwrap();
            assert_eq!(cli::to_json_string(&doc), cli::to_json_string(&again));
        }
    }
}

#[test]
fn other_commands_match_schema() {
    let files = corpus();
    let find = |name: &str| files.iter().find(|f| f.name == name).unwrap().clone();
    let cusp = find("cusp");
    let cases: Vec<(Command, Option<&SceneFile>)> = vec![
        (Command::Milnor, Some(&cusp)),
        (Command::EulerCertify { complex: CertifyComplex::DeRham }, Some(&cusp)),
        (Command::Spencer { module: SpencerModule::OmegaTop }, Some(&files[0])),
        (Command::FilteredSpencer { n: Some(2), p: 2 }, None),
        (
            Command::Independence { extended: Box::new(find("cusp-in-a3")), r_max: Some(7) },
            Some(&cusp),
        ),
    ];
    for (cmd, scene) in &cases {
        let doc = cli::run(cmd, *scene, 4).unwrap_or_else(|e| panic!("{}: {e}", cmd.name()));
        validate(&doc).unwrap_or_else(|e| panic!("{}: {e}", cmd.name()));
    }
}
