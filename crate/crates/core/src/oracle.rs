//! Brute-force ground truth: close a matrix group, classify every element
//! and recompute the genus from the Riemann-Hurwitz formula.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

use crate::error::{consistency, domain, Error, Result};
use crate::families::{self, Census, FamilyParams, Torus};
use crate::gf::FieldCtx;
use crate::numthy::{gcd, PrimePower};
use crate::pgu::{
    classify_with_order, fixed_points_on_curve, homology_center, is_unitary, normalize_point,
    ElementClass, ElementType, GramForm, ProjMatrix, Vec3,
};

/// Default cap on the number of elements in a closure.
pub const DEFAULT_CAP: usize = 20_000;

#[derive(Clone, Debug)]
pub struct GroupClosure {
    elements: Vec<ProjMatrix>,
    orders: Vec<u64>,
    classes: Vec<Option<ElementClass>>,
    census: Census,
    centers: BTreeMap<Vec3, u64>,
}

impl GroupClosure {
    /// Elements in discovery order; the identity comes first.
    pub fn elements(&self) -> &[ProjMatrix] {
        &self.elements
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn element_orders(&self) -> &[u64] {
        &self.orders
    }

    /// `None` for the identity.
    pub fn classes(&self) -> &[Option<ElementClass>] {
        &self.classes
    }

    pub fn census(&self) -> &Census {
        &self.census
    }

    /// Number of homologies with each center.
    pub fn centers(&self) -> &BTreeMap<Vec3, u64> {
        &self.centers
    }

    /// Per-center homology counts in descending order.
    pub fn center_counts(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.centers.values().copied().collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }
}

/// The elements of the group generated by `gens`, by breadth-first
/// multiplication.
pub fn close_elements(ctx: &FieldCtx, gens: &[ProjMatrix], cap: usize) -> Result<Vec<ProjMatrix>> {
    let gens: Vec<ProjMatrix> = gens.iter().copied().filter(|g| !g.is_identity()).collect();
    let mut seen: HashSet<ProjMatrix> = HashSet::new();
    let mut elements = vec![ProjMatrix::identity()];
    seen.insert(ProjMatrix::identity());
    let mut head = 0;
    while head < elements.len() {
        let x = elements[head];
        head += 1;
        for g in &gens {
            let y = x.mul(ctx, g);
            if seen.insert(y) {
                if elements.len() >= cap {
                    return Err(Error::Capacity(format!("closure exceeds {cap} elements")));
                }
                elements.push(y);
            }
        }
    }
    Ok(elements)
}

/// Element orders, each cyclic subgroup being walked once.
fn element_orders(ctx: &FieldCtx, elements: &[ProjMatrix]) -> Result<Vec<u64>> {
    let index: HashMap<ProjMatrix, usize> =
        elements.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut orders = vec![0u64; elements.len()];
    orders[0] = 1;
    for i in 1..elements.len() {
        if orders[i] != 0 {
            continue;
        }
        let x = elements[i];
        let mut powers = vec![x];
        let mut y = x;
        loop {
            y = y.mul(ctx, &x);
            if y.is_identity() {
                break;
            }
            if powers.len() > elements.len() {
                return Err(consistency!("{x} has no finite order inside its closure"));
            }
            powers.push(y);
        }
        let o = powers.len() as u64 + 1;
        for (k, p) in powers.iter().enumerate() {
            let j = *index
                .get(p)
                .ok_or_else(|| consistency!("closure is not closed under powers"))?;
            orders[j] = o / gcd(k as u64 + 1, o);
        }
    }
    Ok(orders)
}

/// Closes the group, then classifies each element.
pub fn close_group(
    ctx: &FieldCtx,
    gram: &GramForm,
    gens: &[ProjMatrix],
    cap: usize,
) -> Result<GroupClosure> {
    if let Some(bad) = gens.iter().find(|g| !is_unitary(ctx, gram, g)) {
        return Err(domain!(
            "generator {bad} does not preserve the {} form",
            gram.model()
        ));
    }
    let elements = close_elements(ctx, gens, cap)?;
    let orders = element_orders(ctx, &elements)?;
    let mut classes = Vec::with_capacity(elements.len());
    let mut census = Census::new();
    let mut centers = BTreeMap::new();
    for (m, &o) in elements.iter().zip(&orders) {
        if m.is_identity() {
            classes.push(None);
            continue;
        }
        let class = classify_with_order(ctx, m, o)?;
        *census.entry(class.ty).or_default() += 1;
        if class.ty == ElementType::A {
            let c = homology_center(ctx, m)
                .ok_or_else(|| consistency!("homology {m} has no center"))?;
            let c = normalize_point(ctx, &c).ok_or_else(|| consistency!("zero center for {m}"))?;
            *centers.entry(c).or_default() += 1;
        }
        classes.push(Some(class));
    }
    Ok(GroupClosure {
        elements,
        orders,
        classes,
        census,
        centers,
    })
}

/// The quotient genus from the different, `2g - 2 = |G| (2g' - 2) + Delta`.
pub fn genus_from_census(q: u64, order: u64, census: &Census) -> Result<u64> {
    let delta: i128 = census
        .iter()
        .map(|(t, &n)| t.contribution(q) as i128 * n as i128)
        .sum();
    let num = (q as i128) * (q as i128) - q as i128 - 2 - delta;
    let den = 2 * order as i128;
    if num % den != 0 {
        return Err(consistency!(
            "Riemann-Hurwitz gives a non-integer genus: ({num})/{den} + 1"
        ));
    }
    let g = num / den + 1;
    u64::try_from(g).map_err(|_| consistency!("Riemann-Hurwitz gives a negative genus {g}"))
}

/// Whether every tame element fixes exactly `i(sigma)` curve points.
pub fn fixed_points_agree(
    ctx: &FieldCtx,
    gram: &GramForm,
    closure: &GroupClosure,
) -> Result<Option<String>> {
    for (m, class) in closure.elements.iter().zip(&closure.classes) {
        let Some(class) = class else { continue };
        if !class.ty.is_tame() {
            continue;
        }
        let fixed = fixed_points_on_curve(ctx, m, gram)?;
        if fixed != class.contribution {
            return Ok(Some(format!(
                "{m} of type {} fixes {fixed} curve points, expected {}",
                class.ty, class.contribution
            )));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub q: u64,
    pub family: String,
    pub params: String,
    pub expected_order: u64,
    pub order: u64,
    pub expected_census: Census,
    pub census: Census,
    pub expected_genus: u64,
    pub genus: Option<u64>,
    pub order_ok: bool,
    pub census_ok: bool,
    pub genus_ok: bool,
    /// Per-center homology counts, where the construction fixes them.
    pub centers_ok: Option<bool>,
    /// Sylow structure of torus groups.
    pub structure_ok: Option<bool>,
    pub fixed_points_ok: Option<bool>,
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn all_ok(&self) -> bool {
        self.order_ok
            && self.census_ok
            && self.genus_ok
            && self.centers_ok != Some(false)
            && self.structure_ok != Some(false)
            && self.fixed_points_ok != Some(false)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub cap: usize,
    pub fixed_points: bool,
}

impl Default for VerifyOptions {
    fn default() -> VerifyOptions {
        VerifyOptions {
            cap: DEFAULT_CAP,
            fixed_points: true,
        }
    }
}

/// Builds the family's group and compares it with the closed forms.
pub fn verify_family(
    ctx: &FieldCtx,
    params: &FamilyParams,
    opts: VerifyOptions,
) -> Result<VerifyReport> {
    let q = PrimePower::new(ctx.q())?;
    let record = families::genus(&q, params)?;
    if record.group_order > opts.cap as u64 {
        return Err(Error::Capacity(format!(
            "group order {} exceeds the oracle cap {}",
            record.group_order, opts.cap
        )));
    }
    let expected_census = families::predicted_census(&q, params)?;
    let (gram, gens) = families::generators(ctx, params)?;
    let closure = close_group(ctx, &gram, &gens, opts.cap)?;
    let mut notes = Vec::new();
    let genus = match genus_from_census(q.q(), closure.order(), closure.census()) {
        Ok(g) => Some(g),
        Err(e) => {
            notes.push(e.to_string());
            None
        }
    };
    let centers_ok = families::expected_centers(&q, params)?.map(|want| {
        let got = closure.center_counts();
        if got != want {
            notes.push(format!("homology centers {got:?}, expected {want:?}"));
        }
        got == want
    });
    let structure_ok = match params {
        FamilyParams::T31(t) | FamilyParams::CycQp(t) => {
            Some(torus_structure_ok(&q, t, &closure, &mut notes))
        }
        _ => None,
    };
    let fixed_points_ok = if opts.fixed_points {
        let bad = fixed_points_agree(ctx, &gram, &closure)?;
        if let Some(why) = &bad {
            notes.push(why.clone());
        }
        Some(bad.is_none())
    } else {
        None
    };
    Ok(VerifyReport {
        q: q.q(),
        family: params.family().name().to_string(),
        params: params.to_string(),
        expected_order: record.group_order,
        order: closure.order(),
        order_ok: closure.order() == record.group_order,
        census_ok: *closure.census() == expected_census,
        expected_census,
        census: closure.census().clone(),
        expected_genus: record.genus,
        genus,
        genus_ok: genus == Some(record.genus),
        centers_ok,
        structure_ok,
        fixed_points_ok,
        notes,
    })
}

/// Compares the number of elements of order dividing each prime power with
/// that of the predicted product of cyclic groups.
fn torus_structure_ok(
    q: &PrimePower,
    t: &Torus,
    closure: &GroupClosure,
    notes: &mut Vec<String>,
) -> bool {
    let mut ok = true;
    for (p, parts) in families::sylow_structure(q, t) {
        let top: u64 = parts.iter().product();
        let mut pj = 1u64;
        while pj <= top {
            let want: u64 = parts.iter().map(|&n| gcd(n, pj)).product();
            let got = closure
                .element_orders()
                .iter()
                .filter(|&&o| pj.is_multiple_of(o))
                .count() as u64;
            if want != got {
                notes.push(format!("{got} elements of order dividing {pj}, expected {want} (p={p}, parts {parts:?})"));
                ok = false;
            }
            pj *= p;
        }
    }
    ok
}

/// Every subgroup of a small group, as sorted lists of element indices into
/// `elements`. Subgroups are grown by adjoining one cyclic generator at a
/// time, each carrying a short generating set.
pub fn all_subgroups(ctx: &FieldCtx, elements: &[ProjMatrix]) -> Result<Vec<Vec<usize>>> {
    let n = elements.len();
    let words = n.div_ceil(64);
    let index: HashMap<ProjMatrix, usize> =
        elements.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let lookup = |m: &ProjMatrix| {
        index
            .get(m)
            .copied()
            .ok_or_else(|| consistency!("{m} is outside the group"))
    };
    let mut table = vec![0usize; n * n];
    for i in 0..n {
        for j in 0..n {
            table[i * n + j] = lookup(&elements[i].mul(ctx, &elements[j]))?;
        }
    }
    let identity = lookup(&ProjMatrix::identity())?;
    let has = |b: &[u64], i: usize| b[i / 64] >> (i % 64) & 1 == 1;
    let generate = |gens: &[usize]| {
        let mut b = vec![0u64; words];
        b[identity / 64] |= 1 << (identity % 64);
        let mut list = vec![identity];
        let mut k = 0;
        while k < list.len() {
            let x = list[k];
            k += 1;
            for &g in gens {
                let y = table[x * n + g];
                if !has(&b, y) {
                    b[y / 64] |= 1 << (y % 64);
                    list.push(y);
                }
            }
        }
        b
    };
    let mut cyclic_seen = HashSet::new();
    let cyclic: Vec<usize> = (0..n)
        .filter(|&i| cyclic_seen.insert(generate(&[i])))
        .collect();
    let trivial = generate(&[]);
    let mut seen: HashSet<Vec<u64>> = HashSet::from([trivial.clone()]);
    let mut frontier: Vec<(Vec<u64>, Vec<usize>)> = vec![(trivial, Vec::new())];
    while let Some((s, gens)) = frontier.pop() {
        for &x in &cyclic {
            if has(&s, x) {
                continue;
            }
            let mut next = gens.clone();
            next.push(x);
            let t = generate(&next);
            if seen.insert(t.clone()) {
                frontier.push((t, next));
            }
        }
    }
    let mut out: Vec<Vec<usize>> = seen
        .iter()
        .map(|b| (0..n).filter(|&i| has(b, i)).collect())
        .collect();
    out.sort();
    Ok(out)
}

/// Order and quotient genus of every subgroup of `group`.
pub fn subgroup_genera(
    q: u64,
    group: &GroupClosure,
    subgroups: &[Vec<usize>],
) -> Result<Vec<(u64, u64)>> {
    subgroups
        .iter()
        .map(|s| {
            let mut census = Census::new();
            for &i in s {
                if let Some(c) = group.classes()[i] {
                    *census.entry(c.ty).or_default() += 1;
                }
            }
            Ok((
                s.len() as u64,
                genus_from_census(q, s.len() as u64, &census)?,
            ))
        })
        .collect()
}

/// Generators of the full stabilizer of the reference triangle in PGU(3, q).
pub fn triangle_stabilizer(ctx: &FieldCtx) -> Result<(GramForm, Vec<ProjMatrix>)> {
    let gram = GramForm::new(ctx, crate::pgu::Model::Model1);
    let z = ctx.root_of_unity(ctx.q() + 1)?;
    let (o, n) = (crate::gf::Fe::ONE, crate::gf::Fe::ZERO);
    let gens = vec![
        ProjMatrix::diag(ctx, z, o, o)?,
        ProjMatrix::diag(ctx, o, z, o)?,
        ProjMatrix::new(ctx, [n, o, n, n, n, o, o, n, n])?,
        ProjMatrix::new(ctx, [n, o, n, o, n, n, n, n, o])?,
    ];
    Ok((gram, gens))
}
