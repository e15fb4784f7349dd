use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use troprank::hyperarrange::{hull_projection, kapranov3_certify, tropical_polytope_complex, Certificate};
use troprank::lifts::{build_rank3_lift, rank_over_k};
use troprank::num::{fmt_vec, ratio, Rat};
use troprank::polyfan::{common_refinement_with, euler_characteristic, hypersurface_fan, Fan, RefineOptions};
use troprank::symmetry::{
    canonical_rep, expand_orbits, fundamental_domain, matrix_symmetry_group, orbit_size, stabilizer,
};
use troprank::trop::{is_trop_singular, minor, nonsingular_submatrix, tropical_rank_report, TropicalMatrix};
use troprank::Error;

use crate::report::Report;
use crate::Config;

/// Fans refined without `--unbounded-runtime`.
pub const REFINE_FAN_LIMIT: usize = 6;
/// Random points used by sampled self-checks.
const SAMPLES: usize = 200;

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_matrix(path: &Path) -> anyhow::Result<TropicalMatrix> {
    TropicalMatrix::parse(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn strings(v: &[Rat]) -> Value {
    v.iter().map(|x| x.to_string()).collect()
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

/// Seeded points with a mix of narrow and wide coordinates, so that walls
/// and lower-dimensional cones are hit as well as open regions.
fn sample_points(seed: u64, n: usize) -> Vec<Vec<Rat>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..SAMPLES)
        .map(|_| {
            let spread = if rng.gen_bool(0.5) { 1 } else { 12 };
            (0..n).map(|_| ratio(rng.gen_range(-spread..=spread), rng.gen_range(1..=2))).collect()
        })
        .collect()
}

fn f_vector_json(fan: &Fan) -> Value {
    let fv = fan.f_vector();
    json!({ "lineality_dim": fv.lineality_dim, "counts": fv.counts })
}

pub fn rank(path: &Path) -> anyhow::Result<Report> {
    let m = read_matrix(path)?;
    let rep = tropical_rank_report(&m)?;
    let mut r = Report::new("rank");
    r.line(format!("tropical rank: {}", rep.rank)).field("rank", rep.rank);
    if m.nrows().min(m.ncols()) <= 5 {
        r.line(format!(
            "nonsingular submatrix: rows {} columns {}",
            fmt_vec(&one_based(&rep.rows)),
            fmt_vec(&one_based(&rep.cols))
        ))
        .field("rows", one_based(&rep.rows))
        .field("cols", one_based(&rep.cols));
    }
    let nonsingular = !is_trop_singular(&m.submatrix(&rep.rows, &rep.cols))?;
    let maximal = nonsingular_submatrix(&m, rep.rank + 1).is_none();
    r.check(
        nonsingular && maximal,
        format!("the {0}x{0} submatrix is nonsingular and no larger one is", rep.rank),
    );
    Ok(r)
}

pub fn certify(path: &Path, output: Option<PathBuf>) -> anyhow::Result<Report> {
    let a = read_matrix(path)?;
    let cert = kapranov3_certify(&a)?;
    let (i, j) = cert.stable_pair;
    let mut r = Report::new("certify");
    r.field("stable_pair", vec![i + 1, j + 1])
        .field("hyperplanes", cert.hyperplanes.iter().map(|h| strings(h.coeffs())).collect::<Value>())
        .field(
            "types",
            cert.types.iter().map(|(s, t)| json!([s.to_string(), t.to_string()])).collect::<Value>(),
        )
        .artifact(cert.to_text(), output);
    let verdict = Certificate::parse(&cert.to_text()).map_err(anyhow::Error::from).and_then(|c| Ok(c.verify(&a)?));
    match verdict {
        Ok(()) => r.check(
            true,
            format!("H{} and H{} meet stably at all {} columns", i + 1, j + 1, a.ncols()),
        ),
        Err(e) => r.check(false, format!("certificate does not re-verify: {e:#}")),
    };
    Ok(r)
}

pub fn lift(matrix: &Path, certificate: &Path, output: Option<PathBuf>, cfg: &Config) -> anyhow::Result<Report> {
    let a = read_matrix(matrix)?;
    let cert = Certificate::parse(&read(certificate)?).with_context(|| format!("in {}", certificate.display()))?;
    let lift = build_rank3_lift(&a, &cert, cfg.seed, cfg.retry_limit.get())?;
    let vals_match = lift.valuations().is_ok_and(|v| v == a);
    let rank = rank_over_k(&lift);
    let mut r = Report::new("lift");
    r.field("scale", lift.scale()).field("rank", rank).artifact(lift.to_text(), output);
    r.check(
        vals_match && rank <= 3,
        format!(
            "valuations {} the matrix, rank over Q(t) is {rank}",
            if vals_match { "equal" } else { "differ from" }
        ),
    );
    Ok(r)
}

pub fn hypersurface(
    d: usize,
    n: usize,
    k: usize,
    index: usize,
    output: Option<PathBuf>,
    cfg: &Config,
) -> anyhow::Result<Report> {
    if k == 0 || k > d.min(n) {
        return Err(Error::arg(format!("need 1 <= k <= min(d, n), got k={k}")).into());
    }
    let (rows, cols) = (0..d)
        .combinations(k)
        .cartesian_product((0..n).combinations(k).collect_vec())
        .nth(index.wrapping_sub(1))
        .ok_or_else(|| Error::arg(format!("minor index {index} out of range")))?;
    let f = minor(d, n, &rows, &cols)?;
    let fan = hypersurface_fan(&f)?;
    let fv = fan.f_vector();
    let max = fan.maximal_cones().len();
    let mut r = Report::new("hypersurface");
    r.line(format!("minor: rows {} columns {}", fmt_vec(&one_based(&rows)), fmt_vec(&one_based(&cols))))
        .line(format!("f-vector: {fv}"))
        .line(format!("lineality dimension: {}", fv.lineality_dim))
        .line(format!("maximal cones: {max}"))
        .field("rows", one_based(&rows))
        .field("cols", one_based(&cols))
        .field("f_vector", f_vector_json(&fan))
        .field("maximal_cones", max);
    if let Some(p) = output {
        r.artifact(fan.to_text(), Some(p));
    }
    let mut agree = 0;
    for w in sample_points(cfg.seed, d * n) {
        agree += usize::from(fan.contains(&w) == f.vanishes_at(&w)?);
    }
    r.check(
        agree == SAMPLES,
        format!("support agrees with direct evaluation at {agree}/{SAMPLES} sampled points"),
    );
    Ok(r)
}

pub fn refine(
    paths: &[PathBuf],
    symmetric: Option<(usize, usize)>,
    unbounded: bool,
    output: Option<PathBuf>,
    cfg: &Config,
) -> anyhow::Result<Report> {
    if paths.len() > REFINE_FAN_LIMIT && !unbounded {
        return Err(Error::arg(format!(
            "refining {} fans needs --unbounded-runtime (limit {REFINE_FAN_LIMIT})",
            paths.len()
        ))
        .into());
    }
    if unbounded {
        eprintln!(
            "warning: refinement time grows with the product of the fan sizes; the 25 hypersurfaces of \
             the 4x4 minors of a 5x5 matrix took about two weeks on four processors when first computed"
        );
    }
    let fans: Vec<Fan> = paths
        .iter()
        .map(|p| Fan::parse(&read(p)?).with_context(|| format!("in {}", p.display())))
        .collect::<anyhow::Result<_>>()?;
    let n = fans[0].ambient_dim();
    let options = RefineOptions { lp_backend: cfg.lp_backend() };
    let mut r = Report::new("refine");
    let points = sample_points(cfg.seed, n);
    let in_all = |w: &Vec<Rat>| fans.iter().all(|f| f.contains(w));
    match symmetric {
        None => {
            let fan = common_refinement_with(&fans, None, options)?;
            let max = fan.maximal_cones().len();
            r.line(format!("f-vector: {}", fan.f_vector()))
                .line(format!("maximal cones: {max}"))
                .field("f_vector", f_vector_json(&fan))
                .field("maximal_cones", max)
                .artifact(fan.to_text(), output.clone());
            let agree = points.iter().filter(|w| fan.contains(w) == in_all(w)).count();
            r.check(agree == SAMPLES, format!("support is the intersection at {agree}/{SAMPLES} sampled points"));
        }
        Some((d, m)) => {
            let g = matrix_symmetry_group(d, m)?;
            if g.degree() != n {
                return Err(Error::arg(format!("the {d}x{m} group acts on R^{}, the fans live in R^{n}", g.degree())).into());
            }
            let domain = fundamental_domain(&g)?.cone();
            let reduced = common_refinement_with(&fans, Some(&domain), options)?;
            let max: Vec<_> = reduced.maximal_cones().into_iter().map(|c| reduced.cone(c)).collect();
            let expanded = expand_orbits(&max, &g)?;
            r.line(format!("group order: {}", g.order()?))
                .line(format!("f-vector inside the fundamental domain: {}", reduced.f_vector()))
                .line(format!("maximal cones inside the fundamental domain: {}", max.len()))
                .line(format!("images of those cones under the group: {}", expanded.len()))
                .field("group_order", g.order()?)
                .field("f_vector", f_vector_json(&reduced))
                .field("maximal_cones", max.len())
                .field("expanded_cones", expanded.len())
                .artifact(reduced.to_text(), output.clone());
            let agree = points
                .iter()
                .filter(|w| expanded.iter().any(|c| c.contains(w)) == in_all(w))
                .count();
            r.check(
                agree == SAMPLES,
                format!("expanded support is the intersection at {agree}/{SAMPLES} sampled points"),
            );
        }
    }
    Ok(r)
}

pub fn orbits(paths: &[PathBuf]) -> anyhow::Result<Report> {
    let ms: Vec<TropicalMatrix> = paths.iter().map(|p| read_matrix(p)).collect::<anyhow::Result<_>>()?;
    let (d, n) = (ms[0].nrows(), ms[0].ncols());
    if let Some((p, _)) = paths.iter().zip(&ms).find(|(_, m)| (m.nrows(), m.ncols()) != (d, n)) {
        bail!(Error::arg(format!("{} is not {d}x{n} like the first matrix", p.display())));
    }
    let g = matrix_symmetry_group(d, n)?;
    let order = g.order()?;
    let mut r = Report::new("orbits");
    r.line(format!("group order: {order}")).field("group_order", order);
    let (mut total, mut consistent) = (0, true);
    let mut entries = Vec::new();
    for (p, m) in paths.iter().zip(&ms) {
        let size = orbit_size(m.flatten(), &g)?;
        let stab = stabilizer(m.flatten(), &g)?.len();
        let rep = canonical_rep(m.flatten(), &g)?;
        consistent &= size * stab == order;
        total += size;
        r.line(format!("{}: orbit size {size}, stabilizer order {stab}", p.display()))
            .line(format!("  canonical representative: {}", fmt_vec(&rep)));
        entries.push(json!({
            "input": p.display().to_string(),
            "orbit_size": size,
            "stabilizer_order": stab,
            "canonical_rep": strings(&rep),
        }));
    }
    r.line(format!("total orbit size: {total}"))
        .field("orbits", entries)
        .field("total", total)
        .check(consistent, format!("orbit size times stabilizer order is {order} for every input"));
    Ok(r)
}

pub fn hull(path: &Path) -> anyhow::Result<Report> {
    let m = read_matrix(path)?;
    let points = m.columns();
    let hull = tropical_polytope_complex(&points)?;
    let show = |f: &[u64]| format!("({})", f.iter().join(", "));
    let mut r = Report::new("hull");
    r.line(format!("f-vector: {}", show(&hull.f_vector)))
        .line(format!("type decomposition: {}", show(&hull.type_f_vector)));
    for c in &hull.cells {
        let vs = c.vertices.iter().map(|v| format!("({})", v.iter().join(", "))).join(" ");
        r.line(format!("cell of dimension {}: {vs}", c.dim));
    }
    r.field("hull", serde_json::to_value(&hull)?);
    let fixed = hull
        .cells
        .iter()
        .flat_map(|c| &c.vertices)
        .all(|v| hull_projection(&points, v) == *v);
    let mut counted = vec![0u64; hull.f_vector.len()];
    for c in &hull.cells {
        if let Some(x) = counted.get_mut(c.dim) {
            *x += 1;
        }
    }
    r.check(
        fixed && counted == hull.f_vector,
        "every cell vertex is fixed by the projection onto the hull and the cells match the f-vector",
    );
    Ok(r)
}

pub fn euler(lineality: usize, no_leading_one: bool, raw: &[String]) -> anyhow::Result<Report> {
    let mut counts: Vec<u64> = Vec::new();
    for tok in raw.iter().flat_map(|s| s.split(|c: char| c == ',' || c.is_whitespace() || c == '(' || c == ')')) {
        if tok.is_empty() {
            continue;
        }
        counts.push(tok.parse().map_err(|_| Error::arg(format!("'{tok}' is not a count")))?);
    }
    if no_leading_one {
        counts.insert(0, 1);
    }
    if counts.first() != Some(&1) {
        bail!(Error::arg("the f-vector must start with the lineality entry 1 (or pass --no-leading-one)"));
    }
    let chi = euler_characteristic(&counts);
    let mut r = Report::new("euler");
    r.line(format!("euler characteristic: {chi}"))
        .line(format!("top cone dimension: {}", lineality + counts.len() - 1))
        .field("euler_characteristic", chi)
        .field("lineality_dim", lineality)
        .field("counts", counts);
    Ok(r)
}
