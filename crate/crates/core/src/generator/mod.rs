//! Oracle-validated suite generation.
//!
//! A plan names operations, categories, a per-category count and a seed.
//! Each (operation, category) shard draws candidate inputs from its own
//! ChaCha stream, so shards can be built in parallel and the output does
//! not depend on which other shards were requested. Expected values come
//! from the oracle; a candidate it cannot certify is dropped and logged.

mod cases;
mod fuzz;
mod validate;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::itl::{Assertion, Literal, TestCase, TestSuite};
use crate::judge::AccuracyMode;
use crate::ops::{Op, OpKind};

pub use fuzz::{fuzz_check, fuzz_corpus, nearest_half_pi_multiple, sample_points, FuzzCase};
pub use validate::{derive_expected, self_validate, Derived, Finding, ValidationReport};

/// Assertions per (operation, category) in the bundled suite.
pub const DEFAULT_COUNT: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    Easy,
    SignedZero,
    Infinity,
    Nan,
    Overflow,
    Subnormal,
    Binade,
    TrigReduction,
    IoForms,
    Decorations,
    Fuzz,
}

impl Category {
    pub const ALL: [Category; 11] = [
        Category::Easy,
        Category::SignedZero,
        Category::Infinity,
        Category::Nan,
        Category::Overflow,
        Category::Subnormal,
        Category::Binade,
        Category::TrigReduction,
        Category::IoForms,
        Category::Decorations,
        Category::Fuzz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Category::Easy => "easy",
            Category::SignedZero => "signed-zero",
            Category::Infinity => "infinity",
            Category::Nan => "nan",
            Category::Overflow => "overflow",
            Category::Subnormal => "subnormal",
            Category::Binade => "binade",
            Category::TrigReduction => "trig-reduction",
            Category::IoForms => "io-forms",
            Category::Decorations => "decorations",
            Category::Fuzz => "fuzz",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| format!("unknown category '{s}'"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenPlan {
    /// Operation names; unknown ones are reported and skipped.
    pub ops: Vec<String>,
    pub categories: Vec<Category>,
    /// Assertions per (operation, category). Trig reduction rounds up to
    /// whole triples.
    pub count: usize,
    pub seed: u64,
}

impl GenPlan {
    /// Every operation in every category.
    pub fn full(count: usize, seed: u64) -> GenPlan {
        GenPlan {
            ops: Op::ALL.iter().map(|o| o.name().to_string()).collect(),
            categories: Category::ALL.to_vec(),
            count,
            seed,
        }
    }
}

/// Certification record for one generated assertion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub testcase: String,
    pub index: usize,
    pub line: u32,
    pub category: Category,
    pub q_final: u32,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Generated {
    pub suite: TestSuite,
    pub provenance: Vec<Provenance>,
    /// Dropped candidates, inapplicable categories and unknown operations.
    pub log: Vec<String>,
}

impl Generated {
    pub fn itl(&self) -> String {
        crate::itl::serialize(&self.suite)
    }

    /// The `.provenance` sidecar: one line per assertion, then the log as
    /// comments.
    pub fn provenance_text(&self) -> String {
        let mut out = String::new();
        for p in &self.provenance {
            out.push_str(&format!(
                "{}#{} line={} category={} certified=true q_final={} seed={}\n",
                p.testcase, p.index, p.line, p.category, p.q_final, p.seed
            ));
        }
        for l in &self.log {
            out.push_str(&format!("# {l}\n"));
        }
        out
    }
}

struct Shard {
    case: Option<TestCase>,
    records: Vec<(Category, u32)>,
    log: Vec<String>,
}

fn mode_for(op: Op) -> AccuracyMode {
    if op.kind() == OpKind::Elem {
        AccuracyMode::ACCURATE
    } else {
        AccuracyMode::TIGHTEST
    }
}

fn build_shard(op: Op, cat: Category, plan: &GenPlan) -> Shard {
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let op_index = Op::ALL.iter().position(|&o| o == op).expect("known op") as u64;
    let cat_index = Category::ALL.iter().position(|&c| c == cat).expect("known category") as u64;
    rng.set_stream(op_index * 16 + cat_index);
    let name = format!("{op}.{cat}");
    let mut log = Vec::new();
    let candidates = match cases::candidates(op, cat, plan.count, &mut rng) {
        Ok(c) => c,
        Err(why) => return Shard { case: None, records: Vec::new(), log: vec![format!("inapplicable: {why}")] },
    };
    let limit = if cat == Category::TrigReduction { plan.count.div_ceil(3) * 3 } else { plan.count };
    let mut seen: HashSet<Vec<Literal>> = HashSet::new();
    let mut assertions = Vec::new();
    let mut records = Vec::new();
    for inputs in candidates {
        if assertions.len() == limit {
            break;
        }
        if !seen.insert(inputs.clone()) {
            continue;
        }
        let text = inputs.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ");
        match validate::derive_expected(op, &inputs) {
            Ok(d) if d.certified => {
                assertions.push(Assertion::new(op.name(), inputs, d.literals()).with_mode(mode_for(op)));
                records.push((cat, d.q_final));
            }
            Ok(d) => log.push(format!("dropped {name}: {op} {text} not certified at {} bits", d.q_final)),
            Err(e) => log.push(format!("dropped {name}: {op} {text}: {e}")),
        }
    }
    if assertions.is_empty() {
        log.push(format!("inapplicable: {name} produced no certified assertion"));
        return Shard { case: None, records, log };
    }
    Shard { case: Some(TestCase { name, line: 0, assertions }), records, log }
}

/// Builds the suite for `plan`. Same plan, same bytes.
pub fn generate(plan: &GenPlan) -> Generated {
    let mut log = Vec::new();
    let mut ops: Vec<Op> = Vec::new();
    for name in &plan.ops {
        match Op::from_name(name) {
            Some(op) => ops.push(op),
            None => log.push(format!("unsupported operation '{name}'")),
        }
    }
    ops.sort();
    ops.dedup();
    let mut cats = plan.categories.clone();
    cats.sort();
    cats.dedup();
    let shards: Vec<(Op, Category)> = ops.iter().flat_map(|&o| cats.iter().map(move |&c| (o, c))).collect();
    let built: Vec<Shard> = shards.par_iter().map(|&(o, c)| build_shard(o, c, plan)).collect();

    let mut suite = TestSuite { name: "generated".into(), path: None, testcases: Vec::new() };
    let mut provenance = Vec::new();
    // Line numbers as laid out by the serializer.
    let mut line = 1u32;
    for shard in built {
        log.extend(shard.log);
        let Some(mut tc) = shard.case else { continue };
        tc.line = line;
        for (i, (a, (cat, q))) in tc.assertions.iter_mut().zip(shard.records).enumerate() {
            a.line = line + 1 + i as u32;
            provenance.push(Provenance {
                testcase: tc.name.clone(),
                index: i + 1,
                line: a.line,
                category: cat,
                q_final: q,
                seed: plan.seed,
            });
        }
        line += tc.assertions.len() as u32 + 2;
        suite.testcases.push(tc);
    }
    Generated { suite, provenance, log }
}
