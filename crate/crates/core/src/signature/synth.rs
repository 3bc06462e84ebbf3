//! Gadget synthesis from single vertices by relabeling and 2-glue.
//!
//! A recipe is a tree over SMG/SGG leaves. Replaying it on count triples is
//! exact: gluing count triples `(A, B, C)` gives the glued gadget's counts
//! directly, with no normalization along the way.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::precise::Ctx;
use super::region::{classify_in, RegionClass, DEFAULT_TOLERANCE};
use super::{relabeling_for, Signature};
use crate::error::{Error, Result};
use crate::graph::{Kind, MapBuilder, MixedMap};

#[derive(Debug)]
pub enum Recipe {
    Smg,
    Sgg,
    /// Entry `i` of the inner signature moves to position `types[i]`.
    Relabel(Arc<Recipe>, [usize; 3]),
    Glue(Arc<Recipe>, Arc<Recipe>),
}

pub type Counts = [BigUint; 3];

fn glue_counts(c1: &Counts, c2: &Counts) -> Counts {
    let [a1, b1, g1] = c1;
    let [a2, b2, g2] = c2;
    [a1 * (b2 + g2) + (b1 + g1) * a2, b1 * g2 + g1 * b2, b1 * b2 + g1 * g2]
}

fn permute<T: Clone>(x: &[T; 3], types: [usize; 3]) -> [T; 3] {
    let mut out = x.clone();
    for i in 0..3 {
        out[types[i]] = x[i].clone();
    }
    out
}

fn key(r: &Arc<Recipe>) -> usize {
    Arc::as_ptr(r) as usize
}

impl Recipe {
    pub fn relabel(inner: Arc<Recipe>, types: [usize; 3]) -> Arc<Recipe> {
        if types == [0, 1, 2] {
            return inner;
        }
        Arc::new(Recipe::Relabel(inner, types))
    }

    pub fn glue(a: Arc<Recipe>, b: Arc<Recipe>) -> Arc<Recipe> {
        Arc::new(Recipe::Glue(a, b))
    }

    fn children(&self) -> Vec<&Arc<Recipe>> {
        match self {
            Recipe::Smg | Recipe::Sgg => vec![],
            Recipe::Relabel(a, _) => vec![a],
            Recipe::Glue(a, b) => vec![a, b],
        }
    }
}

impl Drop for Recipe {
    // Long glue chains would otherwise drop recursively.
    fn drop(&mut self) {
        let mut stack = Vec::new();
        let take = |node: &mut Recipe, stack: &mut Vec<Arc<Recipe>>| match node {
            Recipe::Smg | Recipe::Sgg => {}
            Recipe::Relabel(a, _) => stack.push(std::mem::replace(a, Arc::new(Recipe::Smg))),
            Recipe::Glue(a, b) => {
                stack.push(std::mem::replace(a, Arc::new(Recipe::Smg)));
                stack.push(std::mem::replace(b, Arc::new(Recipe::Smg)));
            }
        };
        take(self, &mut stack);
        while let Some(a) = stack.pop() {
            if let Some(mut node) = Arc::into_inner(a) {
                take(&mut node, &mut stack);
            }
        }
    }
}

/// Evaluates a recipe bottom-up over shared nodes without recursion.
fn fold<T: Clone>(root: &Arc<Recipe>, mut leaf: impl FnMut(&Recipe, Vec<T>) -> T) -> T {
    let mut memo: HashMap<usize, T> = HashMap::new();
    let mut stack: Vec<(Arc<Recipe>, bool)> = vec![(root.clone(), false)];
    while let Some((node, expanded)) = stack.pop() {
        if memo.contains_key(&key(&node)) {
            continue;
        }
        if expanded {
            let args = node.children().into_iter().map(|c| memo[&key(c)].clone()).collect();
            let v = leaf(&node, args);
            memo.insert(key(&node), v);
        } else {
            stack.push((node.clone(), true));
            for c in node.children() {
                if !memo.contains_key(&key(c)) {
                    stack.push((c.clone(), false));
                }
            }
        }
    }
    memo.remove(&key(root)).expect("root evaluated")
}

/// Exact VR counts of the gadget the recipe builds.
pub fn replay_counts(r: &Arc<Recipe>) -> Counts {
    fold(r, |node, args: Vec<Arc<Counts>>| {
        Arc::new(match node {
            Recipe::Smg => [BigUint::one(), BigUint::one(), BigUint::zero()],
            Recipe::Sgg => [BigUint::one(), BigUint::one(), BigUint::one()],
            Recipe::Relabel(_, t) => permute(&args[0], *t),
            Recipe::Glue(..) => glue_counts(&args[0], &args[1]),
        })
    })
    .as_ref()
    .clone()
}

pub fn replay_signature(r: &Arc<Recipe>) -> Result<Signature> {
    Signature::from_counts(&replay_counts(r))
}

pub fn vertex_count(r: &Arc<Recipe>) -> usize {
    fold(r, |node, args: Vec<usize>| match node {
        Recipe::Smg | Recipe::Sgg => 1,
        Recipe::Relabel(..) => args[0],
        Recipe::Glue(..) => args[0] + args[1],
    })
}

/// Builds the concrete gadget. Every leaf of the same recipe tree is of one
/// kind; mixing SMG and SGG yields a graph.
pub fn build_recipe(r: &Arc<Recipe>) -> Result<MixedMap> {
    let has_sgg = fold(r, |node, args: Vec<bool>| matches!(node, Recipe::Sgg) || args.into_iter().any(|x| x));
    let kind = if has_sgg { Kind::Graph } else { Kind::Map };
    let mut b = MapBuilder::new(kind);
    // Post-order walk over the tree (shared nodes are copied), each node
    // leaving the four open half-edges of its gadget on the value stack.
    enum Task<'a> {
        Visit(&'a Recipe),
        Finish(&'a Recipe),
    }
    let mut tasks = vec![Task::Visit(r.as_ref())];
    let mut values: Vec<[usize; 4]> = Vec::new();
    while let Some(task) = tasks.pop() {
        match task {
            Task::Visit(node) => {
                tasks.push(Task::Finish(node));
                for c in node.children().into_iter().rev() {
                    tasks.push(Task::Visit(c.as_ref()));
                }
            }
            Task::Finish(node) => {
                let ports = match node {
                    Recipe::Smg => {
                        let v = b.add_vertex(4);
                        // Clockwise labels 0, 1, 3, 2.
                        [v[0], v[1], v[3], v[2]]
                    }
                    Recipe::Sgg => {
                        let v = b.add_vertex(4);
                        [v[0], v[1], v[2], v[3]]
                    }
                    Recipe::Relabel(_, t) => {
                        let inner = values.pop().expect("child built");
                        let perm = relabeling_for(*t);
                        let mut out = [0; 4];
                        for l in 0..4 {
                            out[perm[l] as usize] = inner[l];
                        }
                        out
                    }
                    Recipe::Glue(..) => {
                        let second = values.pop().expect("child built");
                        let first = values.pop().expect("child built");
                        b.connect(first[3], second[0]);
                        b.connect(first[2], second[1]);
                        [first[0], first[1], second[2], second[3]]
                    }
                };
                values.push(ports);
            }
        }
    }
    let ports = values.pop().expect("root built");
    for (l, h) in ports.into_iter().enumerate() {
        b.export(l as u32, h);
    }
    b.build()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub op: String,
    /// Running signature as floats.
    pub signature: [f64; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphParams {
    pub c_star: f64,
    pub alpha: f64,
    pub delta: f64,
    pub alpha0: f64,
    pub glues: usize,
    pub attempts: usize,
}

#[derive(Clone, Debug)]
pub struct SynthesisTrace {
    pub recipe: Arc<Recipe>,
    pub steps: Vec<Step>,
    pub vertices: usize,
    pub graph: Option<GraphParams>,
}

fn sig_f64(c: &Counts) -> [f64; 3] {
    let n: BigUint = c.iter().sum();
    // Keep the top bits only; exact division is far too slow on long traces.
    let shift = n.bits().saturating_sub(100) as usize;
    let nf = (&n >> shift).to_f64().unwrap_or(f64::NAN);
    c.clone().map(|x| (x >> shift).to_f64().unwrap_or(f64::NAN) / nf)
}

struct Tracer {
    steps: Vec<Step>,
}

impl Tracer {
    fn push(&mut self, op: impl Into<String>, r: &Arc<Recipe>) {
        self.steps.push(Step { op: op.into(), signature: sig_f64(&replay_counts(r)) });
    }
}

// Map synthesis. A gadget of form (a, b, 0) has ratio q = a / b.

/// Ratio `q1 + q2` from forms (a1, b1, 0) and (a2, 0, c2).
fn add_ratio(g1: &Arc<Recipe>, g2_form_ab0: &Arc<Recipe>) -> Arc<Recipe> {
    Recipe::glue(g1.clone(), Recipe::relabel(g2_form_ab0.clone(), [0, 2, 1]))
}

/// Map gadget of form (a, b, 0) with `a / b = s / t`, both positive.
fn map_ratio(s: &BigUint, t: &BigUint, tr: &mut Tracer) -> Arc<Recipe> {
    let smg: Arc<Recipe> = Arc::new(Recipe::Smg);
    let mut g = smg.clone();
    let mut k = BigUint::one();
    while &k < t {
        g = add_ratio(&g, &smg);
        k += 1u32;
        tr.push("add 1", &g);
    }
    if !t.is_one() {
        g = Recipe::relabel(g, [1, 0, 2]);
        tr.push("invert", &g);
    }
    let unit = g.clone();
    let mut k = BigUint::one();
    while &k < s {
        g = add_ratio(&g, &unit);
        k += 1u32;
        tr.push(format!("add 1/{t}"), &g);
    }
    g
}

/// `(a, b, 0)` form for the ratio `x / y` of two positive rationals.
fn map_pair(x: &BigRational, y: &BigRational, tr: &mut Tracer) -> Arc<Recipe> {
    let q = x / y;
    map_ratio(q.numer().magnitude(), q.denom().magnitude(), tr)
}

/// Map gadget with exactly the given signature; every entry must be below 1.
pub fn synthesize_map_gadget(target: &Signature) -> Result<(MixedMap, SynthesisTrace)> {
    let trace = plan_map_gadget(target)?;
    Ok((build_recipe(&trace.recipe)?, trace))
}

pub fn plan_map_gadget(target: &Signature) -> Result<SynthesisTrace> {
    let [a, b, c] = target.as_array();
    if [&a, &b, &c].iter().any(|x| **x >= BigRational::one()) {
        return Err(Error::InvalidParameter(format!("{target}: entries must be below 1")));
    }
    let mut tr = Tracer { steps: vec![] };
    let recipe = if c.is_zero() {
        map_pair(&a, &b, &mut tr)
    } else if b.is_zero() {
        let g = map_pair(&a, &c, &mut tr);
        Recipe::relabel(g, [0, 2, 1])
    } else if a.is_zero() {
        let g = map_pair(&b, &c, &mut tr);
        Recipe::relabel(g, [1, 2, 0])
    } else {
        // (0, b/(1-a), c/(1-a)) glued to (a, 0, 1-a).
        let rest = BigRational::one() - &a;
        let g1 = Recipe::relabel(map_pair(&(&b / &rest), &(&c / &rest), &mut tr), [1, 2, 0]);
        let g2 = Recipe::relabel(map_pair(&a, &rest, &mut tr), [0, 2, 1]);
        let g = Recipe::glue(g1, g2);
        tr.push("final glue", &g);
        g
    };
    let got = replay_signature(&recipe)?;
    if &got != target {
        return Err(Error::Degenerate(format!("replay gave {got}, wanted {target}")));
    }
    Ok(SynthesisTrace { vertices: vertex_count(&recipe), recipe, steps: tr.steps, graph: None })
}

// Graph synthesis. A gadget of form (a, a, 1 - 2a) has ratio q = a / (1 - 2a);
// SGG has q = 1.

/// `q -> (1 + q)/(1 + 3q)`: glue the form itself with SGG.
fn mapt1(g: &Arc<Recipe>) -> Arc<Recipe> {
    let glued = Recipe::glue(g.clone(), Arc::new(Recipe::Sgg));
    Recipe::relabel(glued, [2, 0, 1])
}

/// `q -> q/(1 + q)`: glue the form relabeled to (1 - 2a, a, a) with SGG.
fn mapt2(g: &Arc<Recipe>) -> Arc<Recipe> {
    let glued = Recipe::glue(Recipe::relabel(g.clone(), [1, 2, 0]), Arc::new(Recipe::Sgg));
    Recipe::relabel(glued, [2, 0, 1])
}

/// Hard stop for the ratio search.
pub const MAX_RATIO_STEPS: usize = 1_000_000;

/// Sequence of maps (true for `mapt1`) reaching some ratio in `[lo, hi]`,
/// found by pulling the interval back through the inverse maps until it
/// contains 1.
pub fn ratio_path(lo: f64, hi: f64) -> Result<Vec<bool>> {
    let (mut lo, mut hi) = (lo.max(0.0), hi);
    if !(lo <= hi) || hi <= 0.0 {
        return Err(Error::InvalidParameter(format!("empty ratio interval [{lo}, {hi}]")));
    }
    let mut back = Vec::new();
    for _ in 0..MAX_RATIO_STEPS {
        if lo <= 1.0 && 1.0 <= hi {
            back.reverse();
            return Ok(back);
        }
        if hi > 1.0 {
            // Nothing reachable lies above 1.
            return Err(Error::InvalidParameter(format!("ratio interval [{lo}, {hi}] above 1")));
        }
        if lo <= 0.5 {
            // Preimage under q/(1+q), increasing.
            let h = hi.min(0.5);
            (lo, hi) = (lo / (1.0 - lo), h / (1.0 - h));
            back.push(false);
        } else {
            // Preimage under (1+q)/(1+3q), decreasing.
            (lo, hi) = ((1.0 - hi) / (3.0 * hi - 1.0), (1.0 - lo) / (3.0 * lo - 1.0));
            back.push(true);
        }
    }
    Err(Error::SizeCap(format!("ratio search exceeded {MAX_RATIO_STEPS} steps")))
}

fn ratio_gadget(path: &[bool], mut tr: Option<&mut Tracer>) -> Arc<Recipe> {
    let mut g: Arc<Recipe> = Arc::new(Recipe::Sgg);
    let one = || BigUint::one();
    let sgg: Counts = [one(), one(), one()];
    let mut c = sgg.clone();
    for &first in path {
        if first {
            g = mapt1(&g);
            c = permute(&glue_counts(&c, &sgg), [2, 0, 1]);
        } else {
            g = mapt2(&g);
            c = permute(&glue_counts(&permute(&c, [1, 2, 0]), &sgg), [2, 0, 1]);
        }
        if let Some(t) = tr.as_deref_mut() {
            let op = if first { "q -> (1+q)/(1+3q)" } else { "q -> q/(1+q)" };
            t.steps.push(Step { op: op.into(), signature: sig_f64(&c) });
        }
    }
    g
}

fn q_of_alpha(a: f64) -> f64 {
    a / (1.0 - 2.0 * a)
}

/// `delta = eps / K`.
pub const DEFAULT_DELTA_DIVISOR: f64 = 2.0;

/// Gadget-size cap for building the concrete graph.
pub const DEFAULT_SIZE_CAP: usize = 2_000_000;

#[derive(Clone, Debug)]
pub struct GraphSynthOptions {
    pub delta_divisor: f64,
    /// Halve delta and retry this many times when the replayed distance
    /// misses `eps`.
    pub retries: usize,
    pub size_cap: usize,
    pub precision: usize,
}

impl Default for GraphSynthOptions {
    fn default() -> Self {
        GraphSynthOptions {
            delta_divisor: DEFAULT_DELTA_DIVISOR,
            retries: 6,
            size_cap: DEFAULT_SIZE_CAP,
            precision: super::region::DEFAULT_PRECISION,
        }
    }
}

/// Plans a graph gadget within `eps` (L1) of a target in the region; the
/// distance is checked by exact replay.
pub fn plan_graph_gadget(target: &Signature, eps: f64, opts: &GraphSynthOptions) -> Result<SynthesisTrace> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps = {eps}")));
    }
    let mut ctx = Ctx::new(opts.precision);
    if classify_in(&mut ctx, target, DEFAULT_TOLERANCE).class == RegionClass::Outside {
        return Err(Error::InvalidParameter(format!("{target} lies outside the region")));
    }
    if *target == Signature::sgg() {
        let recipe: Arc<Recipe> = Arc::new(Recipe::Sgg);
        return Ok(SynthesisTrace { vertices: 1, recipe, steps: vec![], graph: None });
    }
    let (sorted, idx) = target.sorted_desc();
    // Internal order: (middle, smallest, largest).
    let s1 = &sorted[1];
    let s2 = &sorted[2];
    let back = [idx[1], idx[2], idx[0]];
    let eps_q = BigRational::from_float(eps).expect("finite");

    // c* with f_{c*}(s1) = s2, in closed form.
    let x = ctx.rational(s1);
    let y = ctx.rational(s2);
    let one = ctx.one();
    let zero_c = astro_float::BigFloat::from_word(0, ctx.prec);
    let f0 = ctx.f_c(&zero_c, &x);
    let e = ctx.sub(&one, &ctx.div(&ctx.mul(&ctx.f64(2.0), &f0), &ctx.sub(&one, &x)));
    let lhs = ctx.sub(&ctx.div(&ctx.mul(&ctx.f64(2.0), &y), &ctx.sub(&one, &x)), &one);
    let c_star = if e.is_zero() { ctx.half() } else { ctx.mul(&ctx.half(), &ctx.add(&one, &ctx.div(&lhs, &e))) };
    let c_star_f = super::precise::to_f64(&c_star).clamp(0.0, 0.5);
    let c_star = ctx.f64(c_star_f);
    // Fixed point f_{c*}(a) = a on [0, 1/3].
    let mut lo = astro_float::BigFloat::from_word(0, ctx.prec);
    let mut hi = ctx.div(&one, &ctx.f64(3.0));
    for _ in 0..ctx.prec {
        let mid = ctx.mul(&ctx.add(&lo, &hi), &ctx.half());
        let f = ctx.f_c(&c_star, &mid);
        let g = ctx.sub(&f, &mid);
        if g.is_negative() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let alpha = super::precise::to_f64(&lo);

    let mut delta = eps / opts.delta_divisor;
    let mut best: Option<(BigRational, SynthesisTrace)> = None;
    for attempt in 0..=opts.retries {
        let mut tr = Tracer { steps: vec![] };
        // G: (d'/2, d'/2, 1 - d') with d/2 <= d' <= d. This is the order
        // under which gluing keeps beta and gamma in place.
        let half = (delta / 2.0).min(1.0 / 3.0);
        let g_path = ratio_path(q_of_alpha(half * 0.5), q_of_alpha(half))?;
        let g = ratio_gadget(&g_path, None);
        // G_0: (a0, a0, 1 - 2 a0) with a <= a0 <= a + delta.
        let top = (alpha + delta).min(1.0 / 3.0);
        let path0 = ratio_path(q_of_alpha(alpha), q_of_alpha(top))?;
        let mut cur = ratio_gadget(&path0, Some(&mut tr));
        let mut counts = replay_counts(&cur);
        let alpha0 = sig_f64(&counts)[0];
        let g_counts = replay_counts(&g);
        let (sn, sd) = (s1.numer().magnitude().clone(), s1.denom().magnitude().clone());
        let below = |c: &Counts| {
            let n: BigUint = c.iter().sum();
            &c[0] * &sd < &sn * n
        };
        let mut glues = 0;
        while below(&counts) {
            cur = Recipe::glue(cur, g.clone());
            counts = glue_counts(&counts, &g_counts);
            glues += 1;
            if glues > 100_000_000 / g_path.len().max(1) {
                return Err(Error::SizeCap("too many glue steps".into()));
            }
        }
        tr.steps.push(Step { op: format!("glue with G x{glues}"), signature: sig_f64(&counts) });
        let recipe = Recipe::relabel(cur, back);
        let got = Signature::from_counts(&permute(&counts, back))?;
        let dist = got.l1_distance(target);
        let trace = SynthesisTrace {
            vertices: vertex_count(&recipe),
            recipe,
            steps: tr.steps,
            graph: Some(GraphParams { c_star: c_star_f, alpha, delta, alpha0, glues, attempts: attempt + 1 }),
        };
        let ok = dist <= eps_q;
        if best.as_ref().is_none_or(|(d, _)| dist < *d) {
            best = Some((dist, trace));
        }
        if ok {
            break;
        }
        delta /= 2.0;
    }
    let (dist, trace) = best.expect("at least one attempt");
    if dist > eps_q {
        return Err(Error::Degenerate(format!(
            "closest replayed signature is {} away, above eps = {eps}",
            dist.to_f64().unwrap_or(f64::NAN)
        )));
    }
    Ok(trace)
}

/// Plans and builds the graph gadget; fails when it would exceed the size cap.
pub fn synthesize_graph_gadget(
    target: &Signature,
    eps: f64,
    opts: &GraphSynthOptions,
) -> Result<(MixedMap, SynthesisTrace)> {
    let trace = plan_graph_gadget(target, eps, opts)?;
    if trace.vertices > opts.size_cap {
        return Err(Error::SizeCap(format!("{} vertices, cap {}", trace.vertices, opts.size_cap)));
    }
    Ok((build_recipe(&trace.recipe)?, trace))
}

/// Exact L1 distance between a trace's replayed signature and a target.
pub fn replay_distance(trace: &SynthesisTrace, target: &Signature) -> Result<BigRational> {
    Ok(replay_signature(&trace.recipe)?.l1_distance(target))
}
