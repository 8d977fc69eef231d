#![allow(dead_code)]

use std::path::PathBuf;

use frlab::{Caps, PresentedGroup};

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn load(name: &str) -> PresentedGroup {
    PresentedGroup::from_file(&corpus_dir().join(format!("{name}.json")), &Caps::default())
        .unwrap_or_else(|e| panic!("corpus group {name}: {e}"))
}

pub fn corpus_names() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .filter_map(|e| {
            let p = e.ok()?.path();
            (p.extension()? == "json").then(|| p.file_stem().unwrap().to_string_lossy().into_owned())
        })
        .collect();
    names.sort();
    names
}

pub fn corpus() -> Vec<PresentedGroup> {
    corpus_names().iter().map(|n| load(n)).collect()
}
