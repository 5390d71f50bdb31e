//! The verification report: every check run for one `q`, as JSON.

use std::sync::OnceLock;
use std::time::Instant;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cone::{cone_generators, degree_bound};
use crate::dpctl::negative_control;
use crate::error::{Error, Result};
use crate::gf::{field_of_order, make_field, Field};
use crate::insep::{
    base_locus_check, basis_forms, classify_all_members, fiber_census, fiber_solve, m_basis_check,
    member_singular_point, psi_eval, FiberSolution, MForm,
};
use crate::kmk::{
    conic_rational_points, find_projectivity, km_lattice_check, standard_conic, standard_frame,
    step_independent_check, strange_conics,
};
use crate::lattice::{
    all_points_blowup, contraction_data, euler_char, frac, intersect, rat, AllPointsBlowup,
    DivClass, StandardClasses,
};
use crate::linsys::{base_change_check, cohomology, CohomologyTriple};
use crate::plane::{collinear, plane_points, ProjPoint};
use crate::positivity::{
    ample_perturbation_q2, is_klt_disjoint_snc, nef_big_certificate, NefMode, NefVerdict, PairDesc,
};
use crate::SUPPORTED_Q;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check_id: String,
    pub statement: String,
    pub status: Status,
    pub data: Value,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub q: u64,
    pub seed: u64,
    pub checks: Vec<CheckReport>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn check(&self, id: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.check_id == id)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("plain data")
    }

    pub fn to_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ReportOptions {
    pub seed: u64,
    /// Record wall-clock times; off by default so output is reproducible.
    pub timings: bool,
}

struct Ctx {
    q: u64,
    seed: u64,
    s: AllPointsBlowup,
    c: StandardClasses,
    kvv: OnceLock<Result<CohomologyTriple>>,
}

impl Ctx {
    /// Cohomology of `K_X + B`, shared by the checks that need it.
    fn kvv(&self) -> Result<CohomologyTriple> {
        self.kvv
            .get_or_init(|| cohomology(self.s.surface(), &self.c.k_plus_b()))
            .clone()
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(salt);
        rng
    }
}

type CheckFn = fn(&Ctx) -> Result<(Status, Value)>;

struct Check {
    id: &'static str,
    statement: &'static str,
    q2_only: bool,
    run: CheckFn,
}

fn verdict(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn s(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

fn plane_axioms(ctx: &Ctx) -> Result<(Status, Value)> {
    let inc = ctx.s.incidence();
    let res = inc.check_axioms();
    let n = ctx.q * ctx.q + ctx.q + 1;
    let ok = res.is_ok() && inc.points().len() as u64 == n && inc.lines().len() as u64 == n;
    Ok((
        verdict(ok),
        json!({"points": inc.points().len(), "lines": inc.lines().len(), "error": res.err()}),
    ))
}

fn lines_cover(ctx: &Ctx) -> Result<(Status, Value)> {
    let inc = ctx.s.incidence();
    let mut ok = true;
    for p in inc.points() {
        ok &= inc.cover_check(p)?;
        ok &= inc.lines_through(p)?.len() as u64 == ctx.q + 1;
    }
    Ok((verdict(ok), json!({"lines_through_each_point": ctx.q + 1})))
}

fn form_diagonal(ctx: &Ctx) -> Result<(Status, Value)> {
    let c = &ctx.c;
    let mut ok = intersect(&c.h, &c.h)? == rat(1);
    for (i, e) in c.e.iter().enumerate() {
        ok &= intersect(&c.h, e)?.is_zero();
        for (j, f) in c.e.iter().enumerate() {
            ok &= intersect(e, f)? == if i == j { rat(-1) } else { rat(0) };
        }
    }
    let adjunction =
        c.e.iter()
            .chain(&c.lines)
            .map(|x| Ok(intersect(x, x)? + intersect(x, &c.k)?))
            .collect::<Result<Vec<_>>>()?;
    ok &= adjunction.iter().all(|v| *v == rat(-2));
    Ok((
        verdict(ok),
        json!({"rank": c.e.len() + 1, "adjunction_checked": adjunction.len()}),
    ))
}

fn canonical_square(ctx: &Ctx) -> Result<(Status, Value)> {
    let k2 = intersect(&ctx.c.k, &ctx.c.k)?;
    let expect = rat(9 - ctx.c.e.len() as i64);
    Ok((verdict(k2 == expect), json!({"k_squared": s(k2)})))
}

fn line_identity(ctx: &Ctx) -> Result<(Status, Value)> {
    let c = &ctx.c;
    let q = ctx.q as i64;
    let lhs = (q * q + q + 1) * &c.h;
    let rhs = &c.sum_lines() + &((q + 1) * &c.sum_e());
    Ok((
        verdict(lhs == rhs),
        json!({"lhs": lhs.to_json(), "rhs": rhs.to_json()}),
    ))
}

fn lines_disjoint(ctx: &Ctx) -> Result<(Status, Value)> {
    let c = &ctx.c;
    let q = ctx.q as i64;
    let mut ok = true;
    for (j, l) in c.lines.iter().enumerate() {
        ok &= intersect(l, l)? == rat(-q) && intersect(&c.k, l)? == rat(q - 2);
        for m in &c.lines[j + 1..] {
            ok &= intersect(l, m)?.is_zero();
        }
    }
    Ok((
        verdict(ok),
        json!({"self_intersection": -q, "k_degree": q - 2}),
    ))
}

fn b_square(ctx: &Ctx) -> Result<(Status, Value)> {
    let q = ctx.q as i64;
    let b2 = intersect(&ctx.c.b, &ctx.c.b)?;
    Ok((
        verdict(b2 == rat(-q * q * q + q * q + 1)),
        json!({"b_squared": s(b2)}),
    ))
}

fn b_minus_delta(ctx: &Ctx) -> Result<(Status, Value)> {
    let c = &ctx.c;
    let diff = &c.b - &c.delta;
    let expect = c.h.scale(&frac(1, ctx.q as i64 + 1));
    Ok((
        verdict(diff == expect),
        json!({"b_minus_delta": diff.to_json()}),
    ))
}

fn discrepancy(ctx: &Ctx) -> Result<(Status, Value)> {
    let d = contraction_data(&ctx.c)?;
    let ok = d.coeff == rat(1) - frac(2, ctx.q as i64);
    Ok((verdict(ok), d.to_json()))
}

fn canonical_multiple(ctx: &Ctx) -> Result<(Status, Value)> {
    let d = contraction_data(&ctx.c)?;
    let q = ctx.q as i64;
    let lambda = d.ky_multiplier.1;
    let ok = lambda == q * q - 2 * q - 2
        && (lambda < 0) == (q == 2)
        && d.anti_canonical_ample == (q == 2)
        && d.canonical_ample == (q != 2);
    Ok((verdict(ok), d.to_json()))
}

fn picard_rank(ctx: &Ctx) -> Result<(Status, Value)> {
    let d = contraction_data(&ctx.c)?;
    Ok((verdict(d.rho_y == 1), json!({"rho_y": d.rho_y})))
}

fn singularities(ctx: &Ctx) -> Result<(Status, Value)> {
    let d = contraction_data(&ctx.c)?;
    Ok((
        verdict(d.klt && d.canonical == (ctx.q == 2)),
        json!({"klt": d.klt, "canonical": d.canonical}),
    ))
}

fn anticanonical(ctx: &Ctx) -> Result<(Status, Value)> {
    let minus_k = -&ctx.c.k;
    let mode = if ctx.q == 2 {
        NefMode::FullConeQ2
    } else {
        NefMode::PullbackDecomposition
    };
    let cert = nef_big_certificate(&minus_k, &ctx.c, ctx.s.incidence(), mode)?;
    let ok = if ctx.q == 2 {
        cert.certified() && minus_k == ctx.c.m
    } else {
        matches!(cert.verdict, NefVerdict::NotNef { .. })
    };
    Ok((verdict(ok), cert.to_json()))
}

fn klt_boundary(ctx: &Ctx) -> Result<(Status, Value)> {
    let pair = PairDesc::line_delta(&ctx.c)?;
    let cert = is_klt_disjoint_snc(&pair);
    Ok((
        verdict(cert.klt),
        json!({"klt": cert.klt, "max_coeff": s(&cert.max_coeff), "facts": cert.facts}),
    ))
}

fn nef_big(ctx: &Ctx) -> Result<(Status, Value)> {
    let d = &ctx.c.b - &ctx.c.delta;
    let cert = nef_big_certificate(
        &d,
        &ctx.c,
        ctx.s.incidence(),
        NefMode::PullbackDecomposition,
    )?;
    let mut ok = cert.certified();
    let mut data = json!({"pullback": cert.to_json()});
    if ctx.q == 2 {
        let full = nef_big_certificate(&d, &ctx.c, ctx.s.incidence(), NefMode::FullConeQ2)?;
        ok &= full.certified();
        data["full_cone"] = full.to_json();
    }
    Ok((verdict(ok), data))
}

fn euler_characteristic(ctx: &Ctx) -> Result<(Status, Value)> {
    let q = ctx.q as i64;
    let chi = euler_char(&ctx.c.k_plus_b())?;
    Ok((verdict(2 * chi == q - q * q), json!({"chi": chi})))
}

fn kvv_h1(ctx: &Ctx) -> Result<(Status, Value)> {
    let q = ctx.q as i64;
    let t = ctx.kvv()?;
    let bound = (q * q - q) / 2;
    let mut data = t.to_json();
    data["bound"] = json!(bound);
    Ok((
        verdict(t.h1 as i64 >= bound && t.h1 as i64 - t.h0 as i64 == bound + t.h2 as i64),
        data,
    ))
}

fn kvv_h2(ctx: &Ctx) -> Result<(Status, Value)> {
    let t = ctx.kvv()?;
    Ok((verdict(t.h2 == 0), json!({"h2": t.h2, "h0": t.h0})))
}

fn m_sections(ctx: &Ctx) -> Result<(Status, Value)> {
    let r = m_basis_check(&ctx.s)?;
    Ok((
        verdict(r.passed()),
        serde_json::to_value(&r).expect("plain data"),
    ))
}

fn m_numbers(ctx: &Ctx) -> Result<(Status, Value)> {
    let c = &ctx.c;
    let m2 = intersect(&c.m, &c.m)?;
    let mut ok = m2 == rat(ctx.q as i64);
    for l in &c.lines {
        ok &= intersect(&c.m, l)?.is_zero();
    }
    for e in &c.e {
        ok &= intersect(&c.m, e)?.is_one();
    }
    Ok((verdict(ok), json!({"m_squared": s(m2)})))
}

fn base_locus(ctx: &Ctx) -> Result<(Status, Value)> {
    let r = base_locus_check(&ctx.s, 2)?;
    Ok((
        verdict(r.passed()),
        serde_json::to_value(&r).expect("plain data"),
    ))
}

fn members_classified(ctx: &Ctx) -> Result<(Status, Value)> {
    let all = classify_all_members(&ctx.s)?;
    let centers: std::collections::BTreeSet<usize> = all.iter().map(|m| m.center).collect();
    let q = ctx.q;
    let expected = (q * q * q - 1) / (q - 1);
    let ok = all.len() as u64 == expected
        && centers.len() as u64 == expected
        && all.iter().all(|m| m.lines.len() as u64 == q + 1);
    Ok((
        verdict(ok),
        json!({"members": all.len(), "distinct_centers": centers.len(), "expected": expected}),
    ))
}

fn members_singular(ctx: &Ctx) -> Result<(Status, Value)> {
    let q = ctx.q;
    let base = ctx.s.field();
    let mut checked = 0;
    let mut ok = true;
    for p in ctx.s.incidence().points() {
        let [a, b, c] = p.coords();
        let r = member_singular_point(&MForm::new(base, q, a, b, c)?, q)?;
        ok &= r.passed() && r.rational;
        checked += 1;
    }
    let ext = make_field(base.characteristic(), base.degree() * 2)?;
    let mut rng = ctx.rng(1);
    let mut sampled = Vec::new();
    for _ in 0..5 {
        let coeffs = [
            ext.random(&mut rng),
            ext.random(&mut rng),
            ext.random_nonzero(&mut rng),
        ];
        let r = member_singular_point(&MForm::new(&ext, q, coeffs[0], coeffs[1], coeffs[2])?, q)?;
        ok &= r.passed() && (r.line_components == 0) == !r.on_rational_line;
        sampled.push(json!({
            "point": r.point.to_json(&ext),
            "multiplicity": r.multiplicity,
            "rational": r.rational,
            "on_rational_line": r.on_rational_line,
            "line_components": r.line_components,
        }));
    }
    Ok((
        verdict(ok),
        json!({"rational_members": checked, "extension_order": ext.order(), "sampled": sampled}),
    ))
}

fn psi_forms(ctx: &Ctx) -> Result<(Status, Value)> {
    let q = ctx.q;
    let base = ctx.s.field();
    let ext = make_field(base.characteristic(), base.degree() * 3)?;
    let forms = basis_forms(&ext, q);
    let mut rng = ctx.rng(2);
    let (mut agree, mut excluded) = (0, 0);
    for _ in 0..200 {
        let (u, v) = (ext.random(&mut rng), ext.random(&mut rng));
        let vals = forms.clone().map(|f| f.eval(&[u, v, crate::gf::Elem::ONE]));
        let expect = ext
            .inv(vals[0])
            .ok()
            .map(|i| (ext.mul(vals[1], i), ext.mul(vals[2], i)));
        if expect.is_none() {
            excluded += 1;
        }
        if psi_eval(&ext, q, u, v) == expect {
            agree += 1;
        }
    }
    Ok((
        verdict(agree == 200),
        json!({"samples": 200, "agree": agree, "excluded": excluded, "field_order": ext.order()}),
    ))
}

/// Largest extension degree in `3..=4` whose domain fits the field bound.
pub fn census_extension(q: u64) -> u32 {
    if q.pow(8) <= crate::gf::MAX_ORDER {
        4
    } else {
        3
    }
}

fn census(ctx: &Ctx) -> Result<(Status, Value)> {
    let k = census_extension(ctx.q);
    let c = fiber_census(ctx.q, k, 50, ctx.seed)?;
    let ok = c.histogram.keys().all(|&size| size == 1) && c.solver_mismatches == 0;
    let mut data = c.to_json();
    data["evidence"] = s("sampled evidence for a universal homeomorphism, not a proof");
    Ok((verdict(ok), data))
}

fn round_trip(ctx: &Ctx) -> Result<(Status, Value)> {
    let q = ctx.q;
    let base = ctx.s.field();
    let ext = make_field(base.characteristic(), base.degree() * 3)?;
    let mut rng = ctx.rng(3);
    let (mut solved, mut degenerate, mut ok) = (0, 0, true);
    for _ in 0..200 {
        let (u, v) = (ext.random(&mut rng), ext.random(&mut rng));
        let Some((a, b)) = psi_eval(&ext, q, u, v) else {
            continue;
        };
        match fiber_solve(&ext, q, a, b)? {
            FiberSolution::Solved { u: u2, v: v2 } => {
                solved += 1;
                ok &= (u2, v2) == (u, v);
            }
            FiberSolution::Degenerate(_) => degenerate += 1,
        }
    }
    Ok((
        verdict(ok && solved > 0),
        json!({"solved": solved, "degenerate": degenerate, "field_order": ext.order()}),
    ))
}

fn base_change(ctx: &Ctx) -> Result<(Status, Value)> {
    let mut rng = ctx.rng(4);
    let surface = ctx.s.surface();
    let n = surface.n();
    let mut ok = true;
    let mut divisors = Vec::new();
    for _ in 0..5 {
        let a = rng.random_range(0..=4i64);
        let m: Vec<i64> = (0..n).map(|_| rng.random_range(-1..=2i64)).collect();
        let d = DivClass::from_ints(surface, a, &m)?;
        ok &= base_change_check(surface, &d, 2)?;
        divisors.push(d.to_json());
    }
    Ok((
        verdict(ok),
        json!({"extension_degree": 2, "divisors": divisors}),
    ))
}

fn cone_bounds(_: &Ctx) -> Result<(Status, Value)> {
    let a = degree_bound(-1)?;
    let b = degree_bound(-2)?;
    Ok((
        verdict(a.bound == 3 && b.bound == 2),
        json!({"minus_one": a, "minus_two": b}),
    ))
}

fn cone_generators_check(ctx: &Ctx) -> Result<(Status, Value)> {
    let cert = cone_generators(&ctx.c, ctx.s.incidence())?;
    let summary = cert.summary();
    let ok = cert.generators.len() == 14
        && summary.get("undetermined").copied().unwrap_or(0) == 0
        && summary.get("realized_e") == Some(&7)
        && summary.get("realized_l") == Some(&7);
    Ok((
        verdict(ok),
        json!({"summary": summary, "generators": cert.generators.iter().map(DivClass::to_json).collect::<Vec<_>>()}),
    ))
}

fn strange_conic_check(_: &Ctx) -> Result<(Status, Value)> {
    let mut counts = serde_json::Map::new();
    let mut ok = true;
    for q in [2, 4] {
        let f = field_of_order(q)?;
        let fr = standard_frame(&f);
        let cs = strange_conics(&f, [&fr[1], &fr[2], &fr[3]], &fr[0])?;
        ok &= cs == vec![standard_conic()];
        counts.insert(format!("GF({q})"), json!(cs.len()));
    }
    Ok((verdict(ok), Value::Object(counts)))
}

fn conic_points_check(_: &Ctx) -> Result<(Status, Value)> {
    let f = field_of_order(2)?;
    let pts = conic_rational_points(&standard_conic(), &f);
    let expect: Vec<ProjPoint> = [[0, 1, 0], [1, 0, 0], [1, 1, 1]]
        .iter()
        .map(|&c| ProjPoint::from_ints(&f, c))
        .collect::<Result<_>>()?;
    Ok((
        verdict(pts == expect),
        json!({"points": pts.iter().map(|p| p.to_json(&f)).collect::<Vec<_>>()}),
    ))
}

fn random_frame(f: &Field, pts: &[ProjPoint], rng: &mut ChaCha8Rng) -> [ProjPoint; 4] {
    loop {
        let pick: [ProjPoint; 4] = std::array::from_fn(|_| pts[rng.random_range(0..pts.len())]);
        let general = (0..4).all(|a| {
            (a + 1..4).all(|b| (b + 1..4).all(|c| !collinear(f, &pick[a], &pick[b], &pick[c])))
        });
        if general {
            return pick;
        }
    }
}

fn projectivity_check(ctx: &Ctx) -> Result<(Status, Value)> {
    let mut rng = ctx.rng(5);
    let mut ok = true;
    let mut tested = serde_json::Map::new();
    for q in [2, 4, 9] {
        let f = field_of_order(q)?;
        let pts = plane_points(&f);
        for _ in 0..200 {
            let p = random_frame(&f, &pts, &mut rng);
            let t = random_frame(&f, &pts, &mut rng);
            let sigma = find_projectivity(&f, &p, &t)?;
            ok &= (0..4).all(|i| sigma.apply(&p[i]) == t[i]);
        }
        tested.insert(format!("GF({q})"), json!(200));
    }
    Ok((verdict(ok), Value::Object(tested)))
}

fn triples_check(_: &Ctx) -> Result<(Status, Value)> {
    let mut ok = true;
    let mut out = Vec::new();
    for q in [2, 4] {
        let r = step_independent_check(&field_of_order(q)?)?;
        ok &= r.passed();
        out.push(serde_json::to_value(&r).expect("plain data"));
    }
    Ok((verdict(ok), json!(out)))
}

fn km_lattice(_: &Ctx) -> Result<(Status, Value)> {
    let r = km_lattice_check()?;
    Ok((
        verdict(r.passed()),
        serde_json::to_value(&r).expect("plain data"),
    ))
}

fn ample_perturbation(ctx: &Ctx) -> Result<(Status, Value)> {
    let p = ample_perturbation_q2(&ctx.c, ctx.s.incidence())?;
    Ok((verdict(p.epsilon > rat(0)), p.to_json()))
}

fn negative_control_check(_: &Ctx) -> Result<(Status, Value)> {
    let c = negative_control()?;
    Ok((
        verdict(c.passed()),
        serde_json::to_value(&c).expect("plain data"),
    ))
}

const CHECKS: &[Check] = &[
    Check { id: "plane.axioms", statement: "PG(2,q) has q^2+q+1 points and lines; two points span one line and two lines meet in one point", q2_only: false, run: plane_axioms },
    Check { id: "plane.lines-cover", statement: "every rational point lies on exactly q+1 rational lines", q2_only: false, run: lines_cover },
    Check { id: "lattice.form-diagonal", statement: "the intersection form is diag(1,-1,...,-1) and every E_i and L'_j satisfies C^2 + C.K = -2", q2_only: false, run: form_diagonal },
    Check { id: "lattice.canonical-square", statement: "K_X^2 = 9 - (q^2+q+1)", q2_only: false, run: canonical_square },
    Check { id: "lattice.line-identity", statement: "(q^2+q+1) H = sum L'_j + (q+1) sum E_i", q2_only: false, run: line_identity },
    Check { id: "lattice.lines-disjoint", statement: "the L'_j are pairwise disjoint with L'_j^2 = -q and K.L'_j = q-2", q2_only: false, run: lines_disjoint },
    Check { id: "lattice.b-square", statement: "B^2 = -q^3+q^2+1", q2_only: false, run: b_square },
    Check { id: "lattice.b-minus-delta", statement: "B - Delta = H/(q+1) as Q-classes", q2_only: false, run: b_minus_delta },
    Check { id: "contraction.discrepancy", statement: "contracting the L'_j gives K_X + (1-2/q) sum L'_j as the pullback of K_Y", q2_only: false, run: discrepancy },
    Check { id: "contraction.canonical-multiple", statement: "(q^2+q+1) K_Y = (q^2-2q-2) sum E_i^Y: -K_Y ample for q = 2, K_Y ample for q >= 3", q2_only: false, run: canonical_multiple },
    Check { id: "contraction.picard-rank", statement: "rho(Y) = 1", q2_only: false, run: picard_rank },
    Check { id: "contraction.singularities", statement: "Y is klt, and canonical exactly when q = 2", q2_only: false, run: singularities },
    Check { id: "contraction.anticanonical", statement: "-K_X is nef and big for q = 2 and fails to be nef for q >= 3", q2_only: false, run: anticanonical },
    Check { id: "kvv.klt-boundary", statement: "(X, Delta) with Delta = q/(q+1) sum L'_j is klt", q2_only: false, run: klt_boundary },
    Check { id: "kvv.nef-big", statement: "(K_X + B) - (K_X + Delta) = B - Delta is nef and big", q2_only: false, run: nef_big },
    Check { id: "kvv.euler-characteristic", statement: "chi(X, K_X + B) = (q - q^2)/2", q2_only: false, run: euler_characteristic },
    Check { id: "kvv.h1", statement: "h^1(X, K_X + B) >= (q^2 - q)/2, so Kawamata-Viehweg vanishing fails", q2_only: false, run: kvv_h1 },
    Check { id: "kvv.h2", statement: "h^2(X, K_X + B) = h^0(X, -B) = 0", q2_only: false, run: kvv_h2 },
    Check { id: "insep.m-sections", statement: "h^0(M) = 3, spanned by x^q y - x y^q, y^q z - y z^q, z^q x - z x^q; M = q E_i + sum of the L'_j through P_i", q2_only: false, run: m_sections },
    Check { id: "insep.m-numbers", statement: "M^2 = q, M.L'_j = 0, M.E_i = 1", q2_only: false, run: m_numbers },
    Check { id: "insep.base-locus", statement: "over F_{q^2} the three forms vanish together exactly at the rational points, each a simple base point", q2_only: false, run: base_locus },
    Check { id: "insep.members-classified", statement: "each of the (q^3-1)/(q-1) members over F_q is q E_i plus the q+1 lines through P_i, bijectively in i", q2_only: false, run: members_classified },
    Check { id: "insep.members-singular", statement: "every member of |M| is singular at [alpha^(1/q):beta^(1/q):gamma^(1/q)] and smooth at its other points", q2_only: false, run: members_singular },
    Check { id: "insep.psi-forms", statement: "the affine map Psi agrees with the ratios of the three forms", q2_only: false, run: psi_forms },
    Check { id: "insep.fiber-census", statement: "sampled general fibers of Psi are single points, found by the closed-form inverse", q2_only: false, run: census },
    Check { id: "insep.round-trip", statement: "the closed-form inverse undoes Psi on general points", q2_only: false, run: round_trip },
    Check { id: "linsys.base-change", statement: "h^0 is unchanged by extending scalars to F_{q^2}", q2_only: false, run: base_change },
    Check { id: "cone.degree-bounds", statement: "curves with C^2 = -1 have degree <= 3 and with C^2 = -2 degree <= 2", q2_only: true, run: cone_bounds },
    Check { id: "cone.generators", statement: "the cone of curves of X is generated by E_1..E_7 and L'_1..L'_7", q2_only: true, run: cone_generators_check },
    Check { id: "kmk.strange-conic", statement: "exactly one smooth conic passes through Q_1, Q_2, Q_3 with all tangents through Q, over GF(2) and GF(4)", q2_only: true, run: strange_conic_check },
    Check { id: "kmk.conic-points", statement: "xy + z^2 has exactly the rational points [1:0:0], [0:1:0], [1:1:1] over GF(2)", q2_only: true, run: conic_points_check },
    Check { id: "kmk.projectivity", statement: "any two 4-point frames are related by a unique projectivity", q2_only: true, run: projectivity_check },
    Check { id: "kmk.triples-independent", statement: "projectivities fixing Q permute the rational points of the strange conic and preserve it", q2_only: true, run: triples_check },
    Check { id: "kmk.lattice", statement: "the degree-3 Keel-McKernan lattice contracts to a plane and is isometric to the q = 2 lattice, fixing K", q2_only: true, run: km_lattice },
    Check { id: "positivity.ample-perturbation", statement: "B - Delta - eps sum E_i is ample for small eps > 0", q2_only: true, run: ample_perturbation },
    Check { id: "dpctl.negative-control", statement: "the Fano configuration is not in general position and K_X + B has h^1 = 1", q2_only: true, run: negative_control_check },
];

fn run_check(ctx: &Ctx, check: &Check, timings: bool) -> CheckReport {
    let start = Instant::now();
    let (status, data) = if check.q2_only && ctx.q != 2 {
        (Status::Skipped, json!({"reason": "q=2 only"}))
    } else {
        match (check.run)(ctx) {
            Ok(r) => r,
            Err(Error::Contradiction(msg)) => (Status::Fail, json!({"error": msg})),
            Err(e) => (Status::Skipped, json!({"error": e.to_string()})),
        }
    };
    CheckReport {
        check_id: check.id.to_string(),
        statement: check.statement.to_string(),
        status,
        data,
        elapsed_ms: if timings {
            start.elapsed().as_millis() as u64
        } else {
            0
        },
    }
}

/// Runs every check for `q`, sorted by `check_id`.
pub fn run_report(q: u64, opts: ReportOptions) -> Result<Report> {
    if !SUPPORTED_Q.contains(&q) {
        return Err(match crate::gf::prime_power(q) {
            None => Error::NotPrimePower(q),
            Some(_) => Error::FieldTooLarge(q),
        });
    }
    let s = all_points_blowup(q)?;
    let c = s.classes();
    let ctx = Ctx {
        q,
        seed: opts.seed,
        s,
        c,
        kvv: OnceLock::new(),
    };
    let mut checks: Vec<CheckReport> = CHECKS
        .par_iter()
        .map(|ch| run_check(&ctx, ch, opts.timings))
        .collect();
    checks.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    Ok(Report {
        schema: SCHEMA,
        q,
        seed: opts.seed,
        checks,
    })
}

/// The plane-level and lattice checks for the Keel–McKernan surface over
/// GF(2) or GF(4), for the `kmk` subcommand.
pub fn kmk_checks(order: u64) -> Result<Vec<CheckReport>> {
    if order != 2 && order != 4 {
        return Err(Error::Precondition(format!(
            "kmk checks run over GF(2) or GF(4), not GF({order})"
        )));
    }
    let f = field_of_order(order)?;
    let fr = standard_frame(&f);
    let mut out = Vec::new();
    let mut push = |id: &str, statement: String, ok: bool, data: Value| {
        out.push(CheckReport {
            check_id: id.into(),
            statement,
            status: verdict(ok),
            data,
            elapsed_ms: 0,
        });
    };
    let conics = strange_conics(&f, [&fr[1], &fr[2], &fr[3]], &fr[0])?;
    push(
        "kmk.strange-conic",
        format!("exactly one smooth conic over GF({order}) passes through Q_1, Q_2, Q_3 with all tangents through Q"),
        conics == vec![standard_conic()],
        json!({"conics": conics.iter().map(|c| c.to_json(&f)).collect::<Vec<_>>()}),
    );
    let pts = conic_rational_points(&standard_conic(), &f);
    push(
        "kmk.conic-points",
        format!(
            "xy + z^2 has exactly {} rational points over GF({order})",
            order + 1
        ),
        pts.len() as u64 == order + 1,
        json!({"points": pts.iter().map(|p| p.to_json(&f)).collect::<Vec<_>>()}),
    );
    let r = step_independent_check(&f)?;
    push(
        "kmk.triples-independent",
        "projectivities fixing Q move any triple of rational points of the strange conic to any other and preserve the conic".into(),
        r.passed(),
        serde_json::to_value(&r).expect("plain data"),
    );
    if order == 2 {
        let r = km_lattice_check()?;
        push(
            "kmk.lattice",
            "the degree-3 Keel-McKernan lattice contracts to a plane and is isometric to the q = 2 lattice, fixing K".into(),
            r.passed(),
            serde_json::to_value(&r).expect("plain data"),
        );
    }
    out.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_unique() {
        let ids: std::collections::BTreeSet<&str> = CHECKS.iter().map(|c| c.id).collect();
        assert_eq!(ids.len(), CHECKS.len());
    }

    #[test]
    fn q2_report() {
        let r = run_report(2, ReportOptions::default()).unwrap();
        let failing: Vec<_> = r
            .checks
            .iter()
            .filter(|c| c.status != Status::Pass)
            .collect();
        assert!(failing.is_empty(), "{failing:#?}");
        assert!(r.checks.len() >= 25);
        assert_eq!(r.check("kvv.h1").unwrap().data["h1"], 1);
    }

    #[test]
    fn unsupported_q() {
        assert_eq!(
            run_report(6, ReportOptions::default()).unwrap_err(),
            Error::NotPrimePower(6)
        );
        assert!(run_report(11, ReportOptions::default()).is_err());
    }
}
