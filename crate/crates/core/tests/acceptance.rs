//! One PASS/FAIL line per acceptance criterion. Every oracle here is built
//! from scratch or from a different code path than the one under test.

use std::collections::{BTreeMap, HashMap};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use arboreal::arbspace::Nerve;
use arboreal::atlas::{
    circle_duality, irregular_type_to_link, random_filtered, random_local_system, relative_euler_check, torus_braid,
};
use arboreal::cellsheaf::{
    hom_support_check, omega_certificate, orientation_report, pairing_reports, verdier_dual, CellSheaf, NadlerSheaf,
};
use arboreal::quiverrep::{cyclic_truncated, hochschild, hochschild_unblocked, PathAlgebra, ProjComplex};
use arboreal::treecat::generate::{rooted_trees_up_to, unrooted_trees_up_to};
use arboreal::treecat::{enumerate_correspondences, Arb, RootedTree, Tree};
use arboreal::verify::functoriality;
use arboreal::Rationals;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Connected vertex sets and their edge subsets, by plain search.
fn brute_force_count(t: &Tree) -> usize {
    let n = t.n();
    let mut total = 0;
    for mask in 1u64..(1 << n) {
        let start = mask.trailing_zeros() as usize;
        let mut seen = 1u64 << start;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &(a, b) in t.edges() {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && mask >> y & 1 == 1 && seen >> y & 1 == 0 {
                        seen |= 1 << y;
                        stack.push(y);
                    }
                }
            }
        }
        if seen == mask {
            let inner = t.edges().iter().filter(|&&(a, b)| mask >> a & 1 == 1 && mask >> b & 1 == 1).count();
            total += 1 << inner;
        }
    }
    total
}

fn criterion_1() -> Outcome {
    let a2 = enumerate_correspondences(&Tree::path(2)).len();
    let a3 = enumerate_correspondences(&Tree::path(3)).len();
    ensure(a2 == 4 && a3 == 11, || format!("A2 -> {a2}, A3 -> {a3}"))?;
    let trees = unrooted_trees_up_to(5);
    for t in &trees {
        let got = enumerate_correspondences(t).len();
        let want = brute_force_count(t);
        ensure(got == want, || format!("{t}: enumerated {got}, formula {want}"))?;
    }
    Ok(format!("A2 = 4, A3 = 11, formula on {} trees", trees.len()))
}

/// Chains `p0 < ... < pk` of the order, counted by length from `leq` alone.
fn chain_counts(arb: &Arb) -> BTreeMap<usize, usize> {
    let n = arb.len();
    let mut ending: Vec<Vec<usize>> = vec![vec![1]; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (0..n).filter(|&j| arb.lt(j, i)).count());
    for &i in &order {
        for &j in &order {
            if arb.lt(j, i) {
                let prev = ending[j].clone();
                for (k, c) in prev.into_iter().enumerate() {
                    if ending[i].len() <= k + 1 {
                        ending[i].resize(k + 2, 0);
                    }
                    ending[i][k + 1] += c;
                }
            }
        }
    }
    let mut out = BTreeMap::new();
    for e in ending {
        for (k, c) in e.into_iter().enumerate() {
            if c > 0 {
                *out.entry(k).or_insert(0) += c;
            }
        }
    }
    out
}

/// `d d = 0` using faces recomputed from the chains themselves.
fn boundary_squares_vanish(nerve: &Nerve) -> bool {
    let faces = |s: usize| -> Vec<(usize, i64)> {
        let c = nerve.chain(s);
        if c.len() < 2 {
            return Vec::new();
        }
        (0..c.len())
            .map(|i| {
                let mut face = c.to_vec();
                face.remove(i);
                (nerve.index_of(&face).expect("face is a chain"), if i % 2 == 0 { 1 } else { -1 })
            })
            .collect()
    };
    (0..nerve.len()).all(|s| {
        let mut acc: HashMap<usize, i64> = HashMap::new();
        for (g, e1) in faces(s) {
            for (h, e2) in faces(g) {
                *acc.entry(h).or_insert(0) += e1 * e2;
            }
        }
        acc.values().all(|&v| v == 0)
    })
}

fn criterion_2() -> Outcome {
    let a3 = Nerve::new(&Tree::path(3));
    let by_dim = a3.counts_by_dim();
    let want: BTreeMap<usize, usize> = [(0, 11), (1, 22), (2, 12)].into_iter().collect();
    ensure(by_dim == want && a3.len() == 45, || format!("A3 nerve {by_dim:?}"))?;
    let trees = unrooted_trees_up_to(5);
    for t in &trees {
        let nerve = Nerve::new(t);
        let oracle = chain_counts(nerve.arb());
        ensure(nerve.counts_by_dim() == oracle, || format!("{t}: {:?} vs {oracle:?}", nerve.counts_by_dim()))?;
        ensure(boundary_squares_vanish(&nerve), || format!("{t}: boundary does not square to zero"))?;
    }
    Ok(format!("A3 = (11, 22, 12), total 45; chains and d^2 = 0 on {} trees", trees.len()))
}

fn criterion_3() -> Outcome {
    let f = Rationals;
    let trees = rooted_trees_up_to(5);
    for rt in &trees {
        let alg = PathAlgebra::new(rt);
        let h = hochschild(&f, &alg, 4);
        let mut want = vec![0; 5];
        want[0] = rt.n();
        ensure(h.dims == want, || format!("{}: HH = {:?}", rt.to_compact(), h.dims))?;
        ensure(h.idempotent_basis, || format!("{}: idempotents do not span HH_0", rt.to_compact()))?;
        if rt.n() <= 3 {
            let slow = hochschild_unblocked(&f, &alg, 2);
            ensure(slow == want[..3], || format!("{}: unblocked {slow:?}", rt.to_compact()))?;
        }
    }
    Ok(format!("HH_0 = k^n, HH_1..4 = 0 on {} rooted trees", trees.len()))
}

fn criterion_4() -> Outcome {
    let f = Rationals;
    let mut checked = 0;
    for rt in rooted_trees_up_to(4) {
        let v = functoriality(&f, &rt);
        checked += v.detail.checked;
        ensure(v.pass, || format!("{}: {:?}", rt.to_compact(), v.detail.mismatches))?;
    }
    Ok(format!("{checked} projectives against explicit tensor products"))
}

fn sheaf_setup(rt: &RootedTree) -> (NadlerSheaf, Arc<Nerve>) {
    let ns = NadlerSheaf::new(rt);
    let nerve = Arc::new(Nerve::from_arb(ns.arb_arc()));
    (ns, nerve)
}

fn criterion_5() -> Outcome {
    let f = Rationals;
    let trees = rooted_trees_up_to(4);
    for rt in &trees {
        let (ns, nerve) = sheaf_setup(rt);
        let c = omega_certificate(&f, &ns, &nerve).map_err(|e| e.to_string())?;
        ensure(c.passed(), || format!("{}: {:?}", rt.to_compact(), c.mismatches))?;
    }
    Ok(format!("closed form matches D(k) on the open part for {} rooted trees", trees.len()))
}

fn criterion_6() -> Outcome {
    let f = Rationals;
    let trees = rooted_trees_up_to(5);
    for rt in &trees {
        let (ns, _) = sheaf_setup(rt);
        let r = orientation_report(&f, &ns, 1);
        ensure(r.stalkwise_iso && r.squares_commute, || format!("{}: {:?}", rt.to_compact(), r.failures))?;
        ensure(r.end_omega_dim == 1, || format!("{}: dim End = {}", rt.to_compact(), r.end_omega_dim))?;
    }
    Ok(format!("orientation is an isomorphism and End is 1-dimensional on {} rooted trees", trees.len()))
}

fn criterion_7() -> Outcome {
    let f = Rationals;
    let mut pairs = 0;
    for rt in rooted_trees_up_to(4) {
        let (ns, nerve) = sheaf_setup(&rt);
        for r in pairing_reports(&f, &ns, &nerve, &[1, -1]).map_err(|e| e.to_string())? {
            pairs += r.pairs.len();
            let bad: Vec<_> = r.pairs.iter().filter(|p| !p.ok).map(|p| (&p.alpha, &p.beta)).collect();
            ensure(r.verdict, || format!("{} sign {}: {bad:?}", r.tree, r.sign))?;
        }
    }
    Ok(format!("{pairs} ordered pairs over both signs"))
}

fn criterion_8() -> Outcome {
    let f = Rationals;
    for rt in rooted_trees_up_to(4) {
        let (ns, _) = sheaf_setup(&rt);
        let fails = hom_support_check(&f, &ns);
        ensure(fails.is_empty(), || format!("{}: {:?}", rt.to_compact(), fails))?;
    }
    // a -> b <- c: b is the root
    let rt = RootedTree::new(Tree::path(3), 1).map_err(|e| e.to_string())?;
    let (ns, nerve) = sheaf_setup(&rt);
    let d = rt.n() as i64 - 1;
    let (a, c) = (0, 2);
    let open = nerve.open_part();
    let h_ca: CellSheaf<Rationals> = ns
        .hom_sheaf(&f, &ProjComplex::projective(c, 0), &ProjComplex::projective(a, 0))
        .pullback(&f, &nerve, &open);
    let dual = verdier_dual(&f, &h_ca).map_err(|e| e.to_string())?;
    let supp_ac = nerve.hom_support(&rt, "a", "c").map_err(|e| e.to_string())?;
    let supp_ca = nerve.hom_support(&rt, "c", "a").map_err(|e| e.to_string())?;
    for &s in &open {
        let p = nerve.label(s);
        let dims = dual.stalk(s).cohomology_dims(&f);
        let want: BTreeMap<i64, usize> =
            if supp_ac.contains(p) { [(-d, 1)].into_iter().collect() } else { BTreeMap::new() };
        ensure(dims == want, || format!("A3 dual stalk at {}: {dims:?}", ns.arb().label(p)))?;
    }
    let switched = supp_ac.iter().collect::<Vec<_>>() != supp_ca.iter().collect::<Vec<_>>();
    ensure(switched, || "A3 supports of the two Hom sheaves coincide".into())?;
    Ok("rank one on every support; A3 supports switched by duality".into())
}

fn criterion_9() -> Outcome {
    let f = Rationals;
    let trees = rooted_trees_up_to(4);
    for rt in &trees {
        let c = cyclic_truncated(&f, &PathAlgebra::new(rt), 4);
        let n = rt.n();
        ensure(c.trusted() == [n, 0, n, 0], || format!("{}: HC = {:?}", rt.to_compact(), c.dims))?;
    }
    Ok(format!("HC_0..3 = (n, 0, n, 0) on {} rooted trees", trees.len()))
}

fn criterion_10() -> Outcome {
    let f = Rationals;
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for i in 0..50 {
        let spokes = 1 + i % 3;
        let a = random_filtered(&f, &mut rng, spokes, 2);
        let b = random_filtered(&f, &mut rng, spokes, 2);
        let e = relative_euler_check(&f, &a, &b).map_err(|e| e.to_string())?;
        let lhs = euler_of(&e.hom_ab);
        let rhs = e.boundary_hom_ba - euler_of(&e.hom_ba);
        ensure(e.passed && lhs == rhs && lhs == e.lhs, || format!("comb sample {i}: {e:?}"))?;
    }
    for i in 0..50 {
        let x = random_local_system(&f, &mut rng, 3);
        let y = random_local_system(&f, &mut rng, 3);
        let d = circle_duality(&f, &x, &y).map_err(|e| e.to_string())?;
        let mirrored: BTreeMap<i64, usize> = d.hom_yx.iter().map(|(&m, &k)| (1 - m, k)).collect();
        ensure(mirrored == d.hom_xy, || format!("circle sample {i}: {d:?}"))?;
    }
    Ok("50 comb pairs and 50 circle pairs".into())
}

fn euler_of(dims: &BTreeMap<i64, usize>) -> i64 {
    dims.iter().map(|(&m, &d)| if m % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn criterion_11() -> Outcome {
    let trefoil = irregular_type_to_link(2, 3, true).map_err(|e| e.to_string())?;
    ensure(trefoil.components == 1, || format!("trefoil has {} components", trefoil.components))?;
    for n in 1..=6 {
        for r in 1..=6 {
            let l = irregular_type_to_link(n, r, false).map_err(|e| e.to_string())?;
            ensure(l.components == gcd(n, 2 * r), || format!("({n}, {}): {}", 2 * r, l.components))?;
        }
        for k in 1..=12 {
            let l = torus_braid(n, k).map_err(|e| e.to_string())?;
            ensure(l.components == gcd(n, k), || format!("torus ({n}, {k}): {}", l.components))?;
        }
    }
    Ok("trefoil connected; (n, 2r) closures have gcd(n, 2r) components".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("correspondence counts", criterion_1),
        ("nerve counts", criterion_2),
        ("Hochschild homology", criterion_3),
        ("functoriality on K0", criterion_4),
        ("dualizing complex", criterion_5),
        ("canonical orientation", criterion_6),
        ("nondegeneracy", criterion_7),
        ("Hom sheaf supports", criterion_8),
        ("cyclic homology", criterion_9),
        ("comb and circle", criterion_10),
        ("Stokes links", criterion_11),
    ];
    let mut ok = true;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = check();
        let ms = t.elapsed().as_millis();
        match res {
            Ok(detail) => println!("PASS criterion {:>2} ({name}): {detail} [{ms} ms]", i + 1),
            Err(why) => {
                ok = false;
                println!("FAIL criterion {:>2} ({name}): {why} [{ms} ms]", i + 1);
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
