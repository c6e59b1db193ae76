//! Test-side oracles, written without the library's complex or reduction code.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use lefschetz_core::foliation::PolyForm;
use lefschetz_core::poly::Poly;

pub type Simplex = Vec<usize>;

/// All faces of the facets, grouped by dimension and sorted.
pub fn faces(facets: &[Vec<usize>]) -> Vec<Vec<Simplex>> {
    let dim = facets.iter().map(Vec::len).max().unwrap() - 1;
    let mut sets = vec![BTreeSet::new(); dim + 1];
    for f in facets {
        let mut f = f.clone();
        f.sort_unstable();
        for mask in 1u32..(1 << f.len()) {
            let face: Simplex = f.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
            sets[face.len() - 1].insert(face);
        }
    }
    sets.into_iter().map(|s| s.into_iter().collect()).collect()
}

pub fn f_vector(facets: &[Vec<usize>]) -> Vec<usize> {
    faces(facets).iter().map(Vec::len).collect()
}

/// Rows of `∂_p` (one row per p-simplex, entries on (p-1)-faces).
pub fn boundary_rows(faces: &[Vec<Simplex>], p: usize) -> Vec<Vec<(usize, i64)>> {
    let index: HashMap<&Simplex, usize> = faces[p - 1].iter().enumerate().map(|(i, s)| (s, i)).collect();
    faces[p]
        .iter()
        .map(|s| {
            (0..s.len())
                .map(|i| {
                    let mut t = s.clone();
                    t.remove(i);
                    (index[&t], if i % 2 == 0 { 1 } else { -1 })
                })
                .collect()
        })
        .collect()
}

pub const PRIME: i64 = 2_147_483_629;

fn inv_mod(a: i64, p: i64) -> i64 {
    let (mut r0, mut r1, mut s0, mut s1) = (a.rem_euclid(p), p, 1i64, 0i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(p)
}

/// Rank over `F_p` by sparse row elimination against a pivot table.
pub fn sparse_rank_mod(rows: &[Vec<(usize, i64)>], p: i64) -> usize {
    let mut pivots: HashMap<usize, Vec<(usize, i64)>> = HashMap::new();
    for row in rows {
        let mut r: std::collections::BTreeMap<usize, i64> = std::collections::BTreeMap::new();
        for &(c, v) in row {
            let e = r.entry(c).or_insert(0);
            *e = (*e + v).rem_euclid(p);
        }
        r.retain(|_, v| *v != 0);
        loop {
            let Some((&lead, &val)) = r.iter().next() else { break };
            match pivots.get(&lead) {
                Some(piv) => {
                    // piv is normalized to leading coefficient 1
                    for &(c, v) in piv {
                        let e = r.entry(c).or_insert(0);
                        *e = ((*e as i128 - val as i128 * v as i128).rem_euclid(p as i128)) as i64;
                        if *e == 0 {
                            r.remove(&c);
                        }
                    }
                }
                None => {
                    let inv = inv_mod(val, p);
                    let norm = r.iter().map(|(&c, &v)| (c, ((v as i128 * inv as i128) % p as i128) as i64)).collect();
                    pivots.insert(lead, norm);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Exact rank over `Q` by fraction-free elimination in `i128` (small matrices only).
pub fn dense_rank(mut a: Vec<Vec<i128>>) -> usize {
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut rank = 0;
    let mut prev: i128 = 1;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, piv);
        for r in rank + 1..rows {
            for k in c + 1..cols {
                a[r][k] = (a[rank][c] * a[r][k] - a[r][c] * a[rank][k]) / prev;
            }
            a[r][c] = 0;
        }
        prev = a[rank][c];
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

pub fn dense(rows: &[Vec<(usize, i64)>], cols: usize) -> Vec<Vec<i128>> {
    rows.iter()
        .map(|r| {
            let mut out = vec![0i128; cols];
            for &(c, v) in r {
                out[c] += v as i128;
            }
            out
        })
        .collect()
}

/// Ranks of `∂_1..∂_d` (index 0 is `∂_0 = 0`).
pub fn boundary_ranks(facets: &[Vec<usize>], exact: bool) -> Vec<usize> {
    let f = faces(facets);
    let mut out = vec![0];
    for p in 1..f.len() {
        let rows = boundary_rows(&f, p);
        out.push(if exact { dense_rank(dense(&rows, f[p - 1].len())) } else { sparse_rank_mod(&rows, PRIME) });
    }
    out
}

/// `b_p = c_p − rank ∂_p − rank ∂_{p+1}`.
pub fn betti(facets: &[Vec<usize>], exact: bool) -> Vec<usize> {
    let f = faces(facets);
    let r = boundary_ranks(facets, exact);
    (0..f.len()).map(|p| f[p].len() - r[p] - r.get(p + 1).copied().unwrap_or(0)).collect()
}

/// Hopf trace on chains: `Σ_p (−1)^p tr(g_# on C_p)`.
pub fn chain_lefschetz_number(facets: &[Vec<usize>], perm: &[usize]) -> i64 {
    let f = faces(facets);
    let mut total = 0;
    for (p, list) in f.iter().enumerate() {
        let mut tr = 0i64;
        for s in list {
            let image: Vec<usize> = s.iter().map(|&v| perm[v]).collect();
            let mut sorted = image.clone();
            sorted.sort_unstable();
            if sorted != *s {
                continue;
            }
            // sign of the permutation taking s to image
            let pos: Vec<usize> = image.iter().map(|v| s.iter().position(|x| x == v).unwrap()).collect();
            let mut sign = 1;
            for i in 0..pos.len() {
                for j in i + 1..pos.len() {
                    if pos[i] > pos[j] {
                        sign = -sign;
                    }
                }
            }
            tr += sign;
        }
        total += if p % 2 == 0 { tr } else { -tr };
    }
    total
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Facets of the staircase triangulation of a product, built directly.
pub fn product_facets(a: &[Vec<usize>], b: &[Vec<usize>], nb: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for s in a {
        let mut s = s.clone();
        s.sort_unstable();
        for t in b {
            let mut t = t.clone();
            t.sort_unstable();
            let (p, q) = (s.len() - 1, t.len() - 1);
            // a lattice path is a choice of which of the p + q steps move in the first factor
            for mask in 0u32..(1 << (p + q)) {
                if mask.count_ones() as usize != p {
                    continue;
                }
                let (mut i, mut j) = (0, 0);
                let mut verts = vec![s[0] * nb + t[0]];
                for step in 0..p + q {
                    if mask >> step & 1 == 1 {
                        i += 1;
                    } else {
                        j += 1;
                    }
                    verts.push(s[i] * nb + t[j]);
                }
                out.push(verts);
            }
        }
    }
    out
}

pub fn torus7() -> Vec<Vec<usize>> {
    (0..7).flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]]).collect()
}

pub fn octahedron() -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for a in [0, 1] {
        for b in [2, 3] {
            for c in [4, 5] {
                out.push(vec![a, b, c]);
            }
        }
    }
    out
}

/// Six-vertex real projective plane.
pub fn rp2() -> Vec<Vec<usize>> {
    [[0, 1, 3], [0, 1, 5], [0, 2, 4], [0, 2, 5], [0, 3, 4], [1, 2, 3], [1, 2, 4], [1, 4, 5], [2, 3, 5], [3, 4, 5]]
        .iter()
        .map(|f| f.to_vec())
        .collect()
}

/// All elements of the permutation group generated by `gens`.
pub fn permutation_group(n: usize, gens: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![(0..n).collect()];
    let mut i = 0;
    while i < out.len() {
        for g in gens {
            let next: Vec<usize> = out[i].iter().map(|&v| g[v]).collect();
            if !out.contains(&next) {
                out.push(next);
            }
        }
        i += 1;
    }
    out
}

fn sorting_sign(v: &[usize]) -> i64 {
    let mut sign = 1;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// Rational Betti numbers of the orbit chain complex `C_*(X) ⊗_G Q`, which
/// equal the dimensions of the invariant cohomology of `X`.
pub fn orbit_betti(facets: &[Vec<usize>], group: &[Vec<usize>]) -> Vec<usize> {
    let f = faces(facets);
    // per degree: simplex -> (orbit column or None if the orbit dies, sign to representative)
    let mut classes: Vec<HashMap<Simplex, Option<(usize, i64)>>> = Vec::new();
    for list in &f {
        let mut map: HashMap<Simplex, Option<(usize, i64)>> = HashMap::new();
        let mut count = 0;
        for s in list {
            if map.contains_key(s) {
                continue;
            }
            let mut images: HashMap<Simplex, i64> = HashMap::new();
            let mut dies = false;
            for g in group {
                let image: Vec<usize> = s.iter().map(|&v| g[v]).collect();
                let sign = sorting_sign(&image);
                let mut sorted = image;
                sorted.sort_unstable();
                // sign with which the sorted image equals g·s
                match images.get(&sorted) {
                    Some(&prev) if prev != sign => dies = true,
                    _ => {
                        images.insert(sorted, sign);
                    }
                }
            }
            let id = if dies {
                None
            } else {
                count += 1;
                Some(count - 1)
            };
            for (t, sign) in images {
                // g·s = sign·t, so t = sign·[s]
                map.insert(t, id.map(|i| (i, sign)));
            }
        }
        classes.push(map);
    }
    let sizes: Vec<usize> = classes.iter().map(|m| m.values().flatten().map(|x| x.0).collect::<BTreeSet<_>>().len()).collect();
    let mut ranks = vec![0; f.len() + 1];
    for p in 1..f.len() {
        let mut rows: HashMap<usize, Vec<(usize, i64)>> = HashMap::new();
        for s in &f[p] {
            let Some((row, rs)) = classes[p][s] else { continue };
            if rows.contains_key(&row) {
                continue;
            }
            let mut entries = Vec::new();
            for i in 0..s.len() {
                let mut t = s.clone();
                t.remove(i);
                if let Some((col, ts)) = classes[p - 1][&t] {
                    entries.push((col, if i % 2 == 0 { 1 } else { -1 } * ts * rs));
                }
            }
            rows.insert(row, entries);
        }
        let rows: Vec<Vec<(usize, i64)>> = rows.into_values().collect();
        ranks[p] = sparse_rank_mod(&rows, PRIME);
    }
    (0..f.len()).map(|p| sizes[p] - ranks[p] - ranks[p + 1]).collect()
}

/// Coefficient `ω_J` for an arbitrary index tuple, by antisymmetry.
pub fn signed_coefficient(form: &PolyForm, idx: &[usize]) -> Poly {
    let dim = form.dim();
    let mut v = idx.to_vec();
    let sign = sorting_sign(&v);
    v.sort_unstable();
    if v.windows(2).any(|w| w[0] == w[1]) {
        return Poly::zero(dim);
    }
    let c = form.coefficient(&v);
    if sign < 0 { -&c } else { c }
}

pub fn index_sets(dim: usize, p: usize) -> Vec<Vec<usize>> {
    (0u64..1 << dim).filter(|m| m.count_ones() as usize == p).map(|m| (0..dim).filter(|k| m >> k & 1 == 1).collect()).collect()
}

/// Lie derivative in coordinates:
/// `(L_Z ω)_I = Z^k ∂_k ω_I + Σ_r ω_{I[r→k]} ∂_{i_r} Z^k`.
pub fn lie_derivative(form: &PolyForm, components: &[Poly]) -> PolyForm {
    let dim = form.dim();
    let p = form.degree();
    let mut out = PolyForm::zero(dim, p);
    for idx in index_sets(dim, p) {
        let mut acc = Poly::zero(dim);
        for k in 0..dim {
            acc = &acc + &(&components[k] * &form.coefficient(&idx).derivative(k));
            for r in 0..p {
                let mut swapped = idx.clone();
                swapped[r] = k;
                acc = &acc + &(&signed_coefficient(form, &swapped) * &components[k].derivative(idx[r]));
            }
        }
        out = out.add(&PolyForm::monomial(acc, &idx).unwrap());
    }
    out
}
