//! The verification suites, each turning one family of checks into records.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use leibniz_core::coalgebra::{coderivation_defect, Coalgebra, CoalgebraKind};
use leibniz_core::graded::GradedSpace;
use leibniz_core::signs::{respectful_partitions, two_block_partitions};
use leibniz_core::structures::{AlgebraStructure, Flavor, LinfMorphism};
use leibniz_core::transfer::{ControlStatus, TransferContext};
use leibniz_core::{Element, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::description::Session;
use crate::report::{Record, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Combinatorics,
    Coalgebra,
    Structure,
    Mc,
    Transfer,
    Theorem,
    Negative,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Combinatorics,
        Suite::Coalgebra,
        Suite::Structure,
        Suite::Mc,
        Suite::Transfer,
        Suite::Theorem,
        Suite::Negative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Combinatorics => "combinatorics",
            Suite::Coalgebra => "coalgebra",
            Suite::Structure => "structure",
            Suite::Mc => "mc",
            Suite::Transfer => "transfer",
            Suite::Theorem => "theorem",
            Suite::Negative => "negative",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

/// Parses `all` or a comma-separated list of suite names.
pub fn parse_suites(s: &str) -> Result<Vec<Suite>, String> {
    if s == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    let mut out: Vec<Suite> = s.split(',').map(|p| p.trim().parse()).collect::<Result<_, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// Number of seeded mutations per Leibniz structure.
pub const MUTATIONS: usize = 24;

/// Letter degrees of the fixed three-letter space used by the coproduct
/// checks.
pub const MIXED_DEGREES: [i64; 3] = [-1, 0, 1];

fn stirling_table(n: usize) -> Vec<Vec<u64>> {
    let mut s = vec![vec![0u64; n + 1]; n + 1];
    s[0][0] = 1;
    for i in 1..=n {
        for j in 1..=i {
            s[i][j] = j as u64 * s[i - 1][j] + s[i - 1][j - 1];
        }
    }
    s
}

pub fn combinatorics() -> Vec<Record> {
    const S: &str = "combinatorics";
    let table = stirling_table(8);
    let mut out = Vec::new();
    let mut bad = None;
    let mut bell_bad = None;
    let mut bell = vec![1u64];
    for n in 1..=8 {
        let mut total = 0;
        for j in 1..=n {
            let got = respectful_partitions(n, j).len() as u64;
            total += got;
            if got != table[n][j] && bad.is_none() {
                bad = Some(format!("n={n} j={j}: {got} partitions, S(n,j)={}", table[n][j]));
            }
        }
        // B(n) = sum_k C(n-1, k) B(k)
        let mut b = 0u64;
        let mut binom = 1u64;
        for (k, bk) in bell.iter().enumerate() {
            b += binom * bk;
            binom = binom * (n as u64 - 1 - k as u64) / (k as u64 + 1);
        }
        bell.push(b);
        if total != b && bell_bad.is_none() {
            bell_bad = Some(format!("n={n}: {total} partitions, Bell={b}"));
        }
    }
    let anchor = "respectful partitions vs Stirling numbers of the second kind";
    let mut r = Record::pass_if(S, "respectful partition counts, 1 <= j <= n <= 8", anchor, bad.is_none()).with_checked(36);
    r.witness = bad;
    out.push(r);
    let mut r = Record::pass_if(S, "respectful partition totals, n <= 8", "totals vs Bell numbers", bell_bad.is_none())
        .with_checked(8);
    r.witness = bell_bad;
    out.push(r);
    let mut two_bad = None;
    for n in 2..=8 {
        let got = two_block_partitions(n).map(|p| p.len()).unwrap_or(0);
        if got != (1 << n) - 2 && two_bad.is_none() {
            two_bad = Some(format!("n={n}: {got}"));
        }
    }
    let mut r = Record::pass_if(S, "ordered two-block splittings, n <= 8", "2^n - 2 splittings", two_bad.is_none())
        .with_checked(7);
    r.witness = two_bad;
    out.push(r);
    out
}

type Triple = (Vec<usize>, Vec<usize>, Vec<usize>);

/// `(Δ ⊗ 1)Δ = (1 ⊗ Δ)Δ` and `τΔ = Δ` on every basis word up to `max_len`.
pub fn coproduct_checks(coalg: &Coalgebra, max_len: usize) -> (usize, Option<String>, Option<String>) {
    let mut checked = 0;
    let mut coassoc = None;
    let mut cocomm = None;
    for w in coalg.basis_words_up_to(max_len) {
        checked += 1;
        let mut left: BTreeMap<Triple, i64> = BTreeMap::new();
        let mut right: BTreeMap<Triple, i64> = BTreeMap::new();
        let mut direct: BTreeMap<(Vec<usize>, Vec<usize>), i64> = BTreeMap::new();
        let mut swapped: BTreeMap<(Vec<usize>, Vec<usize>), i64> = BTreeMap::new();
        for ((a, b), s) in coalg.comultiply_word(&w) {
            for ((a1, a2), s2) in coalg.comultiply_word(&a) {
                *left.entry((a1, a2, b.clone())).or_default() += (s * s2) as i64;
            }
            for ((b1, b2), s2) in coalg.comultiply_word(&b) {
                *right.entry((a.clone(), b1, b2)).or_default() += (s * s2) as i64;
            }
            let twist = if (coalg.word_degree(&a) * coalg.word_degree(&b)).rem_euclid(2) == 1 { -1 } else { 1 };
            *direct.entry((a.clone(), b.clone())).or_default() += s as i64;
            *swapped.entry((b, a)).or_default() += (s * twist) as i64;
        }
        for m in [&mut left, &mut right] {
            m.retain(|_, v| *v != 0);
        }
        direct.retain(|_, v| *v != 0);
        swapped.retain(|_, v| *v != 0);
        if left != right && coassoc.is_none() {
            coassoc = Some(format!("word {w:?}"));
        }
        if direct != swapped && cocomm.is_none() {
            cocomm = Some(format!("word {w:?}"));
        }
    }
    (checked, coassoc, cocomm)
}

pub fn coalgebra(session: &Session) -> Vec<Record> {
    const S: &str = "coalgebra";
    let mut out = Vec::new();
    for kind in [CoalgebraKind::Tensor, CoalgebraKind::Symmetric] {
        let label = kind_label(kind);
        let coalg = Coalgebra::new(kind, MIXED_DEGREES.to_vec());
        let (checked, coassoc, cocomm) = coproduct_checks(&coalg, 5);
        let mut r = Record::pass_if(
            S,
            format!("coassociativity on {label} words of length <= 5, letter degrees {MIXED_DEGREES:?}"),
            "(Δ⊗1)Δ = (1⊗Δ)Δ",
            coassoc.is_none(),
        )
        .with_checked(checked);
        r.witness = coassoc;
        out.push(r);
        let mut r = Record::pass_if(
            S,
            format!("graded cocommutativity on {label} words of length <= 5, letter degrees {MIXED_DEGREES:?}"),
            "τΔ = Δ",
            cocomm.is_none(),
        )
        .with_checked(checked);
        r.witness = cocomm;
        out.push(r);
    }
    for (name, g) in &session.structures {
        let q = g.to_coderivation();
        let mut bad = None;
        let words = q.source().basis_words_up_to(3);
        for w in &words {
            if !coderivation_defect(&q, w, g.order()).is_zero() {
                bad = Some(crate::report::word_names(w, g.space()));
                break;
            }
        }
        let mut r = Record::pass_if(
            S,
            format!("{name}: extended Q is a coderivation on words of length <= 3"),
            "ΔQ = (Q⊗1 + 1⊗Q)Δ",
            bad.is_none(),
        )
        .with_checked(words.len());
        r.witness = bad;
        out.push(r);
        let projected = q.project_to_generators(3);
        let round_trip = (1..=3).all(|k| {
            let want: Vec<_> = q.taylor(k).map(|m| m.entries().map(|(t, v)| (t.to_vec(), v.clone())).collect()).unwrap_or_default();
            let got: Vec<_> = projected[&k].entries().map(|(t, v)| (t.to_vec(), v.clone())).collect();
            want == got
        });
        out.push(Record::pass_if(
            S,
            format!("{name}: projection recovers the Taylor coefficients of Q"),
            "pr∘Q = (Q_1, Q_2)",
            round_trip,
        ));
    }
    out
}

fn kind_label(kind: CoalgebraKind) -> &'static str {
    match kind {
        CoalgebraKind::Tensor => "tensor",
        CoalgebraKind::Symmetric => "symmetric",
    }
}

/// The identity-level and coderivation-level checks of one structure.
pub fn structure_records(suite: &str, name: &str, g: &AlgebraStructure) -> Vec<Record> {
    let rep = g.check_structure();
    let sp = g.space();
    let mut out = vec![
        Record::from_check(suite, "d^2 = 0", &rep.d_squared, sp, sp),
        Record::from_check(suite, "d is a derivation of the bracket", &rep.derivation, sp, sp),
        Record::from_check(suite, "Jacobi-Leibniz identity", &rep.jacobi, sp, sp),
    ];
    if let Some(a) = &rep.antisymmetry {
        out.push(Record::from_check(suite, "graded antisymmetry", a, sp, sp));
    }
    out.push(Record::from_check(suite, "Q^2 = 0 on tensor words of length <= 3", &rep.square, sp, sp));
    if let Some(s) = &rep.symmetric_square {
        out.push(Record::from_check(suite, "Q^2 = 0 on symmetric words of length <= 3", s, sp, sp));
    }
    out.push(Record::pass_if(
        suite,
        "identity and coderivation verdicts agree word by word",
        "identities hold iff Q^2 = 0",
        rep.verdicts_agree(),
    ));
    for r in &mut out {
        r.name = format!("{name}: {}", r.name);
    }
    out
}

/// Adds one or two random degree-compatible terms to `g`; returns a
/// description of what was added.
fn mutate(g: &mut AlgebraStructure, rng: &mut ChaCha8Rng) -> String {
    let degrees = g.space().degrees();
    let n = g.dim();
    let mut added = Vec::new();
    let want = rng.gen_range(1..=2);
    // draws without a degree-compatible output are redrawn
    for _ in 0..100 {
        if added.len() == want {
            break;
        }
        let c: i64 = [-2, -1, 1, 2][rng.gen_range(0..4)];
        let scalar = Scalar::from_int(c, g.order());
        if rng.gen_bool(0.3) {
            let i = rng.gen_range(0..n);
            let outs: Vec<usize> = (0..n).filter(|&o| degrees[o] == degrees[i] + 1).collect();
            if outs.is_empty() {
                continue;
            }
            let o = outs[rng.gen_range(0..outs.len())];
            g.add_differential_term(i, &Element::term(o, scalar)).expect("degree-matched term");
            added.push(format!("d{} += {c} {}", g.space().name(i), g.space().name(o)));
        } else {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let outs: Vec<usize> = (0..n).filter(|&o| degrees[o] == degrees[i] + degrees[j]).collect();
            if outs.is_empty() {
                continue;
            }
            let o = outs[rng.gen_range(0..outs.len())];
            g.add_bracket_term(i, j, &Element::term(o, scalar)).expect("degree-matched term");
            added.push(format!(
                "[{}, {}] += {c} {}",
                g.space().name(i),
                g.space().name(j),
                g.space().name(o)
            ));
        }
    }
    if added.is_empty() {
        "no change".to_string()
    } else {
        added.join(", ")
    }
}

pub fn structure(session: &Session, seed: u64) -> Vec<Record> {
    const S: &str = "structure";
    let mut out = Vec::new();
    for (name, g) in &session.structures {
        out.extend(structure_records(S, name, g));
    }
    let leibniz: Vec<_> = session.structures.iter().filter(|(_, g)| g.flavor() == Flavor::Leibniz).collect();
    if leibniz.is_empty() {
        out.push(
            Record::new(S, "seeded mutations", "identities hold iff Q^2 = 0", Status::Skipped)
                .with_witness("no Leibniz structure in the input"),
        );
    }
    for (name, g) in leibniz {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut broken = 0;
        for k in 0..MUTATIONS {
            let mut h = g.clone();
            let what = mutate(&mut h, &mut rng);
            let rep = h.check_structure();
            let verdict = if rep.identities_hold() {
                "identities hold, Q^2 = 0".to_string()
            } else {
                broken += 1;
                let failing: Vec<&str> = [
                    ("d^2", &rep.d_squared),
                    ("derivation", &rep.derivation),
                    ("Jacobi-Leibniz", &rep.jacobi),
                ]
                .iter()
                .filter(|(_, r)| !r.passed())
                .map(|(n, _)| *n)
                .collect();
                let at = rep
                    .square
                    .first_failure()
                    .map(|f| crate::report::word_names(&f.word, h.space()))
                    .unwrap_or_else(|| "nowhere".into());
                format!("fails {}; Q^2 first nonzero at {at}", failing.join(", "))
            };
            out.push(
                Record::pass_if(
                    S,
                    format!("{name}: mutation {k}"),
                    "identities hold iff Q^2 = 0",
                    rep.verdicts_agree(),
                )
                .with_witness(format!("{what}: {verdict}")),
            );
        }
        out.push(
            Record::new(S, format!("{name}: mutations breaking an identity"), "mutation coverage", Status::Pass)
                .with_witness(format!("{broken} of {MUTATIONS}")),
        );
    }
    out
}

fn mc_target<'a>(session: &'a Session) -> Option<(&'a str, &'a AlgebraStructure, &'a Element)> {
    let (name, alpha) = session.mc.as_ref()?;
    let g = session.structure(name)?;
    Some((name.as_str(), g, alpha))
}

pub fn mc(session: &Session, max_arity: usize) -> Vec<Record> {
    const S: &str = "mc";
    let mut out = Vec::new();
    let Some((name, g, alpha)) = mc_target(session) else {
        out.push(Record::new(S, "Maurer-Cartan checks", "dα = ½[α,α]", Status::Skipped).with_witness("no mc_element"));
        return out;
    };
    let sp = g.space();
    match g.mc_check(alpha) {
        Err(e) => {
            out.push(Record::error(S, format!("{name}: Maurer-Cartan element"), "dα = ½[α,α]", e));
            return out;
        }
        Ok(mc) => {
            let mut r = Record::pass_if(S, format!("{name}: Maurer-Cartan equation"), "dα = ½[α,α]", mc.is_maurer_cartan());
            if !mc.is_maurer_cartan() {
                r.witness = Some(format!("residual {}", mc.residual.display(sp)));
            }
            out.push(r);
            out.push(Record::from_check(S, "(d_α)^2 = 0", &mc.d_alpha_squared, sp, sp));
            out.push(Record::from_check(S, "[dα - ½[α,α], x] = 0", &mc.residual_bracket, sp, sp));
            out.push(Record::pass_if(
                S,
                format!("{name}: both twisting conditions agree"),
                "(d_α)^2 = 0 iff [residual, ·] = 0",
                mc.conditions_agree(),
            ));
        }
    }
    match g.derived_structure(alpha) {
        Err(e) => out.push(Record::error(S, format!("{name}: derived structure"), "[x,y]_α = [(-1)^|x| d_α x, y]", e)),
        Ok(der) => {
            out.extend(structure_records(S, &format!("{name} derived by α"), &der));
            out.push(Record::from_check(S, "Q_{α,1}(x) = Q_1(x) + Q_2(x α)", &g.bridge_check(&der, alpha), sp, sp));
        }
    }
    if g.flavor() == Flavor::Lie {
        match g.exp_twist_check(alpha, 3) {
            Ok(rep) => out.push(Record::from_check(S, "Q(x e^α) = Q_α(x) e^α", &rep, sp, sp)),
            Err(e) => out.push(Record::error(S, "exponential twist", "Q(x e^α) = Q_α(x) e^α", e)),
        }
    }
    if let Some((src, _, spec)) = &session.morphism {
        if src != name {
            out.push(
                Record::new(S, "morphism checks", "F(e^α) = e^β", Status::Skipped)
                    .with_witness("the Maurer-Cartan element lives on another structure"),
            );
            return out;
        }
        match spec.build(max_arity.max(4) + session.order as usize - 1) {
            Err(e) => out.push(Record::error(S, "morphism", "FQ = Q'F", e)),
            Ok(f) => out.extend(morphism_records(&f, alpha, max_arity)),
        }
    }
    out
}

fn morphism_records(f: &LinfMorphism, alpha: &Element, max_arity: usize) -> Vec<Record> {
    const S: &str = "mc";
    let (src, tgt) = (f.source().space(), f.target().space());
    let mut out = Vec::new();
    let top = f.known_arity().map_or(max_arity, |k| k.min(max_arity));
    match f.verify(top) {
        Ok(rep) => out.push(Record::from_check(S, "F∘Q = Q'∘F", &rep, src, tgt)),
        Err(e) => out.push(Record::error(S, "morphism identity", "F∘Q = Q'∘F", e)),
    }
    let beta = match f.mc_image(alpha) {
        Ok(b) => b,
        Err(e) => {
            out.push(Record::error(S, "Maurer-Cartan image", "β = pr F(e^α - 1)", e));
            return out;
        }
    };
    let image_ok = f.target().mc_check(&beta).map(|m| m.is_maurer_cartan()).unwrap_or(false);
    out.push(
        Record::pass_if(S, "β = pr F(e^α - 1) is Maurer-Cartan", "dβ = ½[β,β]", image_ok)
            .with_witness(format!("β = {}", beta.display(tgt))),
    );
    for (label, check) in [
        ("group-like", f.group_like_check(alpha, &beta, 4)),
        ("evaluation", f.exp_evaluation_check(alpha, &beta, 3)),
    ] {
        let anchor = if label == "group-like" { "F(e^α - 1) = e^β - 1" } else { "F(x e^α) = T_αF(x) e^β" };
        match check {
            Ok(rep) => out.push(Record::from_check(S, anchor, &rep, src, tgt)),
            Err(e) => out.push(Record::error(S, label, anchor, e)),
        }
    }
    out
}

/// Builds the transfer context for the session's morphism and element.
pub fn transfer_context(session: &Session, max_arity: usize) -> Result<TransferContext, String> {
    let (src, _, spec) = session.morphism.as_ref().ok_or("no morphism in the input")?;
    let (name, alpha) = session.mc.as_ref().ok_or("no mc_element in the input")?;
    if src != name {
        return Err("the Maurer-Cartan element must live on the morphism's source".into());
    }
    let need = max_arity + session.order as usize - 1;
    let f = spec.build(need).map_err(|e| e.to_string())?;
    TransferContext::new(f, alpha.clone(), max_arity).map_err(|e| e.to_string())
}

fn spaces(ctx: &TransferContext) -> (&GradedSpace, &GradedSpace) {
    (ctx.source_derived().space(), ctx.target_derived().space())
}

pub fn transfer(ctx: &TransferContext) -> Vec<Record> {
    const S: &str = "transfer";
    let (src, tgt) = spaces(ctx);
    let n_max = ctx.max_arity();
    let mut out = Vec::new();
    let mut push = |anchor: &str, rep: leibniz_core::Result<leibniz_core::report::CheckReport>| match rep {
        Ok(r) => out.push(Record::from_check(S, anchor, &r, src, tgt)),
        Err(e) => out.push(Record::error(S, anchor, anchor, e)),
    };
    push("T_α^1 F is a chain map", ctx.check_chain_map());
    for n in 2..=n_max {
        push("B_n^0 vanishes on Q_{α,1}-images", ctx.check_b_zero_vanishing(n));
    }
    for n in 2..=n_max {
        push("C_n^0 = Σ Q'_{β,2}(B_1^0 ⊗ B_{n-1}^0) - R_n^1", ctx.check_c_zero(n));
        for j in 1..=3 {
            if j + 2 <= n {
                push("C_n^j = two Q'_{β,2} sums + R_n^j - R_n^{j+1}", ctx.check_c(n, j));
            }
        }
    }
    for (n, j) in [(3, 1), (4, 1)] {
        if n <= n_max {
            match ctx.check_expansions(n, j) {
                Ok((a, b)) => {
                    out.push(Record::from_check(S, "expansion of B_n^j∘Q_{α,1}", &a, src, tgt));
                    out.push(Record::from_check(S, "expansion of B_{n-1}^j∘Q_{α,2}", &b, src, tgt));
                }
                Err(e) => out.push(Record::error(S, format!("expansions at ({n}, {j})"), "B∘Q_α expansions", e)),
            }
        }
    }
    out
}

pub fn theorem(ctx: &TransferContext) -> Vec<Record> {
    const S: &str = "theorem";
    let (src, tgt) = spaces(ctx);
    match ctx.verify_theorem() {
        Err(e) => vec![Record::error(S, "B = Σ B^j is a Leibniz-infinity morphism", "B∘Q_α = Q'_β∘B", e)],
        Ok(rep) => {
            let mut out: Vec<Record> = rep
                .projected
                .iter()
                .map(|(_, r)| Record::from_check(S, "projected morphism identity", r, src, tgt))
                .collect();
            out.push(Record::from_check(S, "B∘Q_α = Q'_β∘B", &rep.word_level, src, tgt));
            out
        }
    }
}

pub fn negative(ctx: &TransferContext) -> Vec<Record> {
    const S: &str = "negative";
    const ANCHOR: &str = "B_2 + s Q'_2(B_1 · B_1) breaks arity 3";
    let (src, tgt) = spaces(ctx);
    let control = match ctx.negative_control(3) {
        Ok(c) => c,
        Err(e) => return vec![Record::error(S, "negative control", ANCHOR, e)],
    };
    let mut out: Vec<Record> = control
        .unperturbed
        .iter()
        .map(|(_, r)| {
            let mut rec = Record::from_check(S, "unperturbed projected identity", r, src, tgt);
            rec.name = format!("unperturbed {}", rec.name);
            rec
        })
        .collect();
    let rule = control.sign_rule.unwrap_or("none");
    let (status, note) = match &control.status {
        ControlStatus::Confirmed => (Status::Pass, format!("sign rule s = {rule}; arity 2 passes, arity 3 fails")),
        ControlStatus::Inconclusive(why) => (Status::Inconclusive, why.clone()),
        // still passing at arity 3 only means this fixture cannot witness
        // the obstruction
        ControlStatus::Unexpected(why) if control.perturbed_arity3.is_some() => {
            (Status::Inconclusive, format!("sign rule s = {rule}; {why}"))
        }
        ControlStatus::Unexpected(why) => (Status::Fail, why.clone()),
    };
    let repair = match (control.perturbed_arity3.is_some(), control.first_obstructed_arity) {
        (false, _) => String::new(),
        (true, Some(k)) => format!("; no choice of B_3..B_{k} repairs it"),
        (true, None) => "; a different B_3 repairs it".to_string(),
    };
    let mut rec = Record::new(S, "perturbed quadratic coefficient", ANCHOR, status).with_witness(note + &repair);
    if let Some(r3) = &control.perturbed_arity3 {
        rec.checked = r3.checked;
        if let Some(f) = r3.first_failure() {
            let w = rec.witness.take().unwrap_or_default();
            rec.witness = Some(format!(
                "{w}; first arity-3 residual at {} -> {}",
                crate::report::word_names(&f.word, src),
                crate::report::residual_text(&f.residual, tgt)
            ));
        }
    }
    out.push(rec);
    out
}
