#![allow(dead_code)]

use std::path::{Path, PathBuf};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expect {
    Value(i64),
    TypeError,
    Nothing,
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub path: PathBuf,
    pub src: String,
    pub pure: bool,
    pub expect: Expect,
}

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn header<'s>(src: &'s str, key: &str) -> Option<&'s str> {
    src.lines()
        .filter_map(|l| l.strip_prefix('#'))
        .filter_map(|l| l.trim().strip_prefix(key))
        .map(|v| v.trim_start_matches(':').trim())
        .next()
}

pub fn corpus() -> Vec<Fixture> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "sfc"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|path| {
            let src = std::fs::read_to_string(&path).unwrap();
            let pure = match header(&src, "purity") {
                Some("pure") => true,
                Some("plumbing") => false,
                other => panic!("{}: bad purity header {other:?}", path.display()),
            };
            let expect = match header(&src, "expect") {
                None => Expect::Nothing,
                Some("type-error") => Expect::TypeError,
                Some(n) => Expect::Value(n.parse().unwrap()),
            };
            Fixture {
                name: path.file_stem().unwrap().to_string_lossy().into_owned(),
                path,
                src,
                pure,
                expect,
            }
        })
        .collect()
}

pub fn fixture(name: &str) -> Fixture {
    corpus()
        .into_iter()
        .find(|f| f.name == name)
        .unwrap_or_else(|| panic!("no fixture {name}"))
}
