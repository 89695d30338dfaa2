//! Count-based n-gram language model over sub-token streams with
//! Jelinek-Mercer interpolation and nested scope layers.
//!
//! Three layers: a global layer and per-package layers are frozen after
//! training; per-file cache layers mutate during a session. A query blends
//! the layers innermost-first, `p = w * inner + (1 - w) * outer`; layers
//! with no counts drop out of the blend entirely, so an untouched file
//! cache leaves probabilities exactly as trained.

pub mod beam;

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::corpus::ast::CompilationUnit;
use crate::corpus::subtok::split_subtokens;
use crate::corpus::token::TokenKind;
use crate::scalar::Real;

pub use beam::beam_search;

pub const UNK: &str = "<unk>";
pub const HOLE: &str = "<hole>";

#[derive(Debug, Error)]
pub enum LmError {
    #[error("cannot train a language model on an empty corpus")]
    EmptyCorpus,
}

/// Identifies which nested layers a query runs against.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryScope {
    pub package: Option<String>,
    pub file: Option<String>,
}

impl QueryScope {
    pub fn global() -> Self {
        QueryScope::default()
    }

    pub fn at(package: &str, file: &str) -> Self {
        QueryScope {
            package: Some(package.to_string()),
            file: Some(file.to_string()),
        }
    }
}

/// Token id space: kept sub-tokens plus the UNK and HOLE entries, which are
/// always present.
#[derive(Debug, Clone)]
pub struct Vocab {
    tokens: Vec<String>,
    ids: HashMap<String, u32>,
}

impl Vocab {
    fn build(mut kept: Vec<String>) -> Self {
        kept.push(UNK.to_string());
        kept.push(HOLE.to_string());
        kept.sort();
        kept.dedup();
        let ids = kept
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
        Vocab { tokens: kept, ids }
    }

    pub fn from_tokens(tokens: Vec<String>) -> Self {
        Self::build(tokens)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn unk(&self) -> u32 {
        self.ids[UNK]
    }

    pub fn hole(&self) -> u32 {
        self.ids[HOLE]
    }

    pub fn id_of(&self, token: &str) -> u32 {
        self.ids.get(token).copied().unwrap_or_else(|| self.unk())
    }

    pub fn text_of(&self, id: u32) -> &str {
        &self.tokens[id as usize]
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }
}

#[derive(Debug, Clone, Default)]
struct CtxEntry {
    total: u64,
    succ: HashMap<u32, u64>,
}

/// N-gram counts for one layer: context (0..order-1 tokens) to successors.
#[derive(Debug, Clone, Default)]
pub struct CountTable {
    table: HashMap<Box<[u32]>, CtxEntry>,
    total_tokens: u64,
}

impl CountTable {
    fn add_stream(&mut self, ids: &[u32], order: usize) {
        for i in 0..ids.len() {
            for k in 0..order.min(i + 1) {
                let ctx: Box<[u32]> = ids[i - k..i].into();
                let e = self.table.entry(ctx).or_default();
                e.total += 1;
                *e.succ.entry(ids[i]).or_insert(0) += 1;
            }
        }
        self.total_tokens += ids.len() as u64;
    }

    pub fn is_empty(&self) -> bool {
        self.total_tokens == 0
    }

    /// Sorted (context, successor, count) triples for serialization.
    pub fn sorted_entries(&self) -> Vec<(Vec<u32>, u32, u64)> {
        let mut out = Vec::new();
        for (ctx, e) in &self.table {
            for (succ, count) in &e.succ {
                out.push((ctx.to_vec(), *succ, *count));
            }
        }
        out.sort();
        out
    }

    pub fn insert_count(&mut self, ctx: &[u32], succ: u32, count: u64) {
        let e = self.table.entry(ctx.into()).or_default();
        e.total += count;
        *e.succ.entry(succ).or_insert(0) += count;
        if ctx.is_empty() {
            self.total_tokens += count;
        }
    }

    fn jm_prob<F: Real>(&self, order: usize, lambda: F, vocab_size: usize, ctx: &[u32], t: u32) -> F {
        let mut p = F::one() / F::from_len(vocab_size);
        let avail = ctx.len().min(order - 1);
        for k in 0..=avail {
            let c = &ctx[ctx.len() - k..];
            match self.table.get(c) {
                Some(e) if e.total > 0 => {
                    let ml = F::from_count(e.succ.get(&t).copied().unwrap_or(0))
                        / F::from_count(e.total);
                    p = lambda * ml + (F::one() - lambda) * p;
                }
                // unseen context: back off cleanly to the shorter order
                _ => {}
            }
        }
        p
    }
}

/// Training stream: the owning scope plus the sub-token sequence.
#[derive(Debug, Clone)]
pub struct Stream {
    pub package: String,
    pub path: String,
    pub tokens: Vec<String>,
}

/// Model hyperparameters.
#[derive(Debug, Clone)]
pub struct LmParams<F> {
    pub order: usize,
    pub lambda: F,
    pub layer_weight: F,
    pub min_count: u64,
}

impl<F: Real> Default for LmParams<F> {
    fn default() -> Self {
        LmParams {
            order: 6,
            lambda: F::from_f64(0.5).unwrap(),
            layer_weight: F::from_f64(0.5).unwrap(),
            min_count: 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NGramModel<F> {
    pub params: LmParams<F>,
    vocab: Vocab,
    global: CountTable,
    packages: BTreeMap<String, CountTable>,
    files: BTreeMap<String, CountTable>,
}

impl<F: Real> NGramModel<F> {
    /// Train global and package layers from scratch. Tokens seen fewer than
    /// `min_count` times map to UNK; ids are assigned in sorted token order
    /// so training is independent of stream order.
    pub fn train(streams: &[Stream], params: LmParams<F>) -> Result<Self, LmError> {
        if streams.is_empty() || streams.iter().all(|s| s.tokens.is_empty()) {
            return Err(LmError::EmptyCorpus);
        }
        let mut freq: HashMap<&str, u64> = HashMap::new();
        for s in streams {
            for t in &s.tokens {
                *freq.entry(t).or_insert(0) += 1;
            }
        }
        let kept: Vec<String> = {
            let mut v: Vec<String> = freq
                .iter()
                .filter(|(_, c)| **c >= params.min_count)
                .map(|(t, _)| t.to_string())
                .collect();
            v.sort();
            v
        };
        let vocab = Vocab::build(kept);
        let mut model = NGramModel {
            params,
            vocab,
            global: CountTable::default(),
            packages: BTreeMap::new(),
            files: BTreeMap::new(),
        };
        model.add_streams(streams);
        Ok(model)
    }

    /// Accumulate more training streams into the frozen layers (used by the
    /// maintenance scenario); the vocabulary stays closed.
    pub fn add_streams(&mut self, streams: &[Stream]) {
        for s in streams {
            let ids = self.encode(&s.tokens);
            self.global.add_stream(&ids, self.params.order);
            self.packages
                .entry(s.package.clone())
                .or_default()
                .add_stream(&ids, self.params.order);
        }
    }

    pub fn from_parts(
        params: LmParams<F>,
        vocab: Vocab,
        global: CountTable,
        packages: BTreeMap<String, CountTable>,
    ) -> Self {
        NGramModel {
            params,
            vocab,
            global,
            packages,
            files: BTreeMap::new(),
        }
    }

    pub fn vocab(&self) -> &Vocab {
        &self.vocab
    }

    pub fn global_table(&self) -> &CountTable {
        &self.global
    }

    pub fn package_tables(&self) -> &BTreeMap<String, CountTable> {
        &self.packages
    }

    pub fn encode(&self, tokens: &[String]) -> Vec<u32> {
        tokens.iter().map(|t| self.vocab.id_of(t)).collect()
    }

    /// P(t | context) blended across the layers the scope selects.
    pub fn token_prob(&self, scope: &QueryScope, context: &[u32], t: u32) -> F {
        let order = self.params.order;
        let lambda = self.params.lambda;
        let n_vocab = self.vocab.len();
        let w = self.params.layer_weight;
        let mut p = self
            .global
            .jm_prob(order, lambda, n_vocab, context, t);
        if let Some(pkg) = &scope.package {
            if let Some(table) = self.packages.get(pkg) {
                if !table.is_empty() {
                    let inner = table.jm_prob(order, lambda, n_vocab, context, t);
                    p = w * inner + (F::one() - w) * p;
                }
            }
        }
        if let Some(file) = &scope.file {
            if let Some(table) = self.files.get(file) {
                if !table.is_empty() {
                    let inner = table.jm_prob(order, lambda, n_vocab, context, t);
                    p = w * inner + (F::one() - w) * p;
                }
            }
        }
        p
    }

    /// Probability of a whole token sequence following the context.
    pub fn sequence_prob(&self, scope: &QueryScope, context: &[u32], seq: &[u32]) -> F {
        let mut ctx: Vec<u32> = tail(context, self.params.order - 1).to_vec();
        let mut p = F::one();
        for &t in seq {
            p = p * self.token_prob(scope, tail(&ctx, self.params.order - 1), t);
            ctx.push(t);
        }
        p
    }

    /// Record observed tokens in a file's cache layer. Later queries scoped
    /// to that file see the update; other files are unaffected.
    pub fn update_cache(&mut self, file: &str, tokens: &[String]) {
        let ids = self.encode(tokens);
        self.files
            .entry(file.to_string())
            .or_default()
            .add_stream(&ids, self.params.order);
    }

    /// Drop a file's cache layer, restoring pre-cache probabilities exactly.
    pub fn clear_cache(&mut self, file: &str) {
        self.files.remove(file);
    }
}

fn tail(xs: &[u32], n: usize) -> &[u32] {
    &xs[xs.len().saturating_sub(n)..]
}

/// Sub-token stream of a whole unit: identifiers split by naming
/// conventions, keywords/operators/literals pass through unsplit, holes map
/// to the HOLE token.
pub fn unit_stream(unit: &CompilationUnit) -> Stream {
    Stream {
        package: unit.package.clone(),
        path: unit.path.clone(),
        tokens: unit_subtokens(unit, None),
    }
}

/// Sub-tokens of a unit's lexical stream, stopping before `cut` when given.
pub fn unit_subtokens(
    unit: &CompilationUnit,
    cut: Option<crate::corpus::token::Pos>,
) -> Vec<String> {
    let mut out = Vec::new();
    for t in &unit.tokens {
        if let Some(c) = cut {
            if t.pos() >= c {
                break;
            }
        }
        push_token(&mut out, t.kind, &t.text);
    }
    out
}

/// Sub-token form of arbitrary source text (candidate renderings).
pub fn text_subtokens(text: &str) -> Vec<String> {
    match crate::corpus::lexer::lex(text) {
        Ok(tokens) => {
            let mut out = Vec::new();
            for t in &tokens {
                push_token(&mut out, t.kind, &t.text);
            }
            out
        }
        Err(_) => split_subtokens(text),
    }
}

fn push_token(out: &mut Vec<String>, kind: TokenKind, text: &str) {
    match kind {
        TokenKind::Ident => out.extend(split_subtokens(text)),
        TokenKind::Hole => out.push(HOLE.to_string()),
        _ => out.push(text.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn toy(tokens: &[&str]) -> NGramModel<f64> {
        let stream = Stream {
            package: "p".to_string(),
            path: "f".to_string(),
            tokens: tokens.iter().map(|s| s.to_string()).collect(),
        };
        NGramModel::train(
            &[stream],
            LmParams {
                order: 2,
                lambda: 0.5,
                layer_weight: 0.5,
                min_count: 2,
            },
        )
        .unwrap()
    }

    #[test]
    fn bigram_counts_from_hand_count() {
        let m = toy(&["a", "b", "a", "b"]);
        let a = m.vocab().id_of("a");
        let b = m.vocab().id_of("b");
        let entries = m.global_table().sorted_entries();
        let count = |ctx: &[u32], s: u32| {
            entries
                .iter()
                .find(|(c, succ, _)| c == ctx && *succ == s)
                .map(|(_, _, n)| *n)
                .unwrap_or(0)
        };
        assert_eq!(count(&[a], b), 2);
        assert_eq!(count(&[b], a), 1);
        assert_eq!(count(&[], a), 2);
        assert_eq!(count(&[], b), 2);
    }

    #[test]
    fn jm_recursion_hand_computed() {
        // corpus "a b a b", order 2, lambda 0.5, vocabulary {a, b, <unk>, <hole>}:
        //   P0       = 1/4
        //   P1(b)    = 0.5 * 2/4 + 0.5 * 1/4   = 0.375
        //   P(b | a) = 0.5 * 2/2 + 0.5 * 0.375 = 0.6875
        let m = toy(&["a", "b", "a", "b"]);
        let a = m.vocab().id_of("a");
        let b = m.vocab().id_of("b");
        let p = m.token_prob(&QueryScope::global(), &[a], b);
        assert!((p - 0.6875).abs() < 1e-12, "got {p}");
        // independent recursion oracle over raw counts
        let oracle = {
            let v = 4.0;
            let p0 = 1.0 / v;
            let p1 = 0.5 * (2.0 / 4.0) + 0.5 * p0;
            0.5 * (2.0 / 2.0) + 0.5 * p1
        };
        assert!((p - oracle).abs() < 1e-15);
    }

    #[test]
    fn rare_token_maps_to_unk() {
        let stream = Stream {
            package: String::new(),
            path: "f".to_string(),
            tokens: vec!["a".into(), "a".into(), "once".into()],
        };
        let m: NGramModel<f64> = NGramModel::train(&[stream], LmParams::default()).unwrap();
        assert_eq!(m.vocab().id_of("once"), m.vocab().unk());
        assert_ne!(m.vocab().id_of("a"), m.vocab().unk());
    }

    #[test]
    fn unseen_token_with_empty_context_stays_positive() {
        let m = toy(&["a", "b", "a", "b"]);
        let p = m.token_prob(&QueryScope::global(), &[], m.vocab().unk());
        assert!(p > 0.0);
    }

    #[test]
    fn two_packages_have_disjoint_layers() {
        let s1 = Stream {
            package: "p1".into(),
            path: "f1".into(),
            tokens: vec!["a".into(), "a".into(), "b".into(), "b".into()],
        };
        let s2 = Stream {
            package: "p2".into(),
            path: "f2".into(),
            tokens: vec!["c".into(), "c".into(), "d".into(), "d".into()],
        };
        let m: NGramModel<f64> = NGramModel::train(&[s1, s2], LmParams::default()).unwrap();
        assert_eq!(m.package_tables().len(), 2);
        let p1 = &m.package_tables()["p1"];
        let c = m.vocab().id_of("c");
        assert!(p1
            .sorted_entries()
            .iter()
            .all(|(_, succ, _)| *succ != c));
    }

    #[test]
    fn lambda_one_is_pure_ml_and_lambda_zero_uniform() {
        let stream = Stream {
            package: String::new(),
            path: "f".into(),
            tokens: vec!["a".into(), "b".into(), "a".into(), "b".into()],
        };
        let m1: NGramModel<f64> = NGramModel::train(
            &[stream.clone()],
            LmParams {
                order: 2,
                lambda: 1.0,
                layer_weight: 0.5,
                min_count: 2,
            },
        )
        .unwrap();
        let a = m1.vocab().id_of("a");
        let b = m1.vocab().id_of("b");
        // pure ML at the deepest seen order: P(b|a) = 1, P(a|a) = 0
        assert_eq!(m1.token_prob(&QueryScope::global(), &[a], b), 1.0);
        assert_eq!(m1.token_prob(&QueryScope::global(), &[a], a), 0.0);
        let m0: NGramModel<f64> = NGramModel::train(
            &[stream],
            LmParams {
                order: 2,
                lambda: 0.0,
                layer_weight: 0.5,
                min_count: 2,
            },
        )
        .unwrap();
        let v = m0.vocab().len() as f64;
        for t in 0..m0.vocab().len() as u32 {
            assert_eq!(m0.token_prob(&QueryScope::global(), &[a], t), 1.0 / v);
        }
    }

    #[test]
    fn sequence_prob_is_the_chain_product() {
        let m = toy(&["a", "b", "a", "b"]);
        let a = m.vocab().id_of("a");
        let b = m.vocab().id_of("b");
        let s = QueryScope::global();
        let single = m.sequence_prob(&s, &[], &[a]);
        assert!((single - m.token_prob(&s, &[], a)).abs() < 1e-15);
        let chain = m.sequence_prob(&s, &[], &[a, b]);
        let expect = m.token_prob(&s, &[], a) * m.token_prob(&s, &[a], b);
        assert!((chain - expect).abs() < 1e-15);
        // extending a sequence never increases its probability
        assert!(chain <= single);
    }

    #[test]
    fn cache_updates_are_isolated_and_reversible() {
        let mut m = toy(&["a", "b", "a", "b", "a", "c", "c", "c"]);
        let a = m.vocab().id_of("a");
        let b = m.vocab().id_of("b");
        let in_f = QueryScope {
            package: None,
            file: Some("F".into()),
        };
        let in_g = QueryScope {
            package: None,
            file: Some("G".into()),
        };
        let before_f = m.token_prob(&in_f, &[a], b);
        let before_g = m.token_prob(&in_g, &[a], b);
        m.update_cache("F", &["a".into(), "b".into()]);
        let after_f = m.token_prob(&in_f, &[a], b);
        let after_g = m.token_prob(&in_g, &[a], b);
        assert!(after_f > before_f, "{after_f} vs {before_f}");
        assert_eq!(after_g, before_g);
        m.clear_cache("F");
        assert_eq!(m.token_prob(&in_f, &[a], b), before_f);
    }

    #[test]
    fn training_is_order_independent() {
        let s1 = Stream {
            package: "p".into(),
            path: "f1".into(),
            tokens: vec!["a".into(), "b".into(), "a".into(), "b".into()],
        };
        let s2 = Stream {
            package: "q".into(),
            path: "f2".into(),
            tokens: vec!["b".into(), "c".into(), "b".into(), "c".into()],
        };
        let m1: NGramModel<f64> =
            NGramModel::train(&[s1.clone(), s2.clone()], LmParams::default()).unwrap();
        let m2: NGramModel<f64> = NGramModel::train(&[s2, s1], LmParams::default()).unwrap();
        assert_eq!(
            m1.global_table().sorted_entries(),
            m2.global_table().sorted_entries()
        );
        assert_eq!(m1.vocab().tokens(), m2.vocab().tokens());
    }

    proptest! {
        #[test]
        fn token_prob_sums_to_one(
            corpus in proptest::collection::vec("[abcd]", 4..40),
            ctx in proptest::collection::vec("[abcd]", 0..4),
        ) {
            let stream = Stream {
                package: "p".into(),
                path: "f".into(),
                tokens: corpus.clone(),
            };
            let m: NGramModel<f64> = NGramModel::train(
                &[stream],
                LmParams { order: 3, lambda: 0.5, layer_weight: 0.5, min_count: 2 },
            ).unwrap();
            let ids = m.encode(&ctx);
            for scope in [QueryScope::global(), QueryScope::at("p", "f")] {
                let sum: f64 = (0..m.vocab().len() as u32)
                    .map(|t| m.token_prob(&scope, &ids, t))
                    .sum();
                prop_assert!((sum - 1.0).abs() < 1e-9, "sum = {sum}");
            }
        }
    }
}
