use std::collections::BTreeMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use arboreal::arbspace::Nerve;
use arboreal::atlas::{
    build_circle, build_comb, circle_duality, irregular_type_to_link, random_filtered, random_local_system,
    relative_euler_check, w1, GluedSpace, Spoke,
};
use arboreal::cellsheaf::{hom_support_check, omega_certificate, orientation_report, pairing_reports, NadlerSheaf};
use arboreal::quiverrep::ProjComplex;
use arboreal::report::Report;
use arboreal::treecat::generate::rooted_trees_up_to;
use arboreal::treecat::{enumerate_correspondences, RootedTree};
use arboreal::verify;
use arboreal::{Error, Field, FieldChoice, PrimeField, Rationals, Result};

use crate::input::parse_tree;
use crate::{Cli, Command, Format, Options, MAX_TREE_CAP};

/// Runs one command, writes its output and returns the verdict.
pub fn run(cli: &Cli) -> Result<bool> {
    let opts = &cli.opts;
    if opts.max_tree_size > MAX_TREE_CAP {
        return Err(Error::InvalidConfig(format!("--max-tree-size {} exceeds the cap {MAX_TREE_CAP}", opts.max_tree_size)));
    }
    if opts.orientation_sign != 1 && opts.orientation_sign != -1 {
        return Err(Error::InvalidConfig("--orientation-sign must be 1 or -1".into()));
    }
    if opts.format == Format::Dot && !matches!(cli.command, Command::Nerve { .. }) {
        return Err(Error::InvalidConfig("--format dot is only available for `nerve`".into()));
    }
    let (text, verdict) = match opts.field {
        FieldChoice::Rational => dispatch(&Rationals, cli)?,
        FieldChoice::Prime { p } => dispatch(&PrimeField::new(p)?, cli)?,
    };
    match &opts.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(verdict)
}

fn base_config(opts: &Options, extra: Value) -> Value {
    let mut v = json!({
        "field": opts.field.label(),
        "max_tree_size": opts.max_tree_size,
        "degree_bound": opts.degree_bound,
        "orientation_sign": opts.orientation_sign,
        "seed": opts.seed,
    });
    if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
        m.extend(e);
    }
    v
}

fn tree_config(opts: &Options, rt: &RootedTree) -> Value {
    base_config(opts, json!({ "tree": rt.to_compact() }))
}

fn finish(r: Report) -> (String, bool) {
    (r.to_json(), r.verdict())
}

fn dispatch<F: Field>(f: &F, cli: &Cli) -> Result<(String, bool)> {
    let opts = &cli.opts;
    let root = opts.root.as_deref();
    Ok(match &cli.command {
        Command::Enumerate { tree } => finish(enumerate(opts, &parse_tree(tree, root)?)),
        Command::Nerve { tree } => nerve(opts, &parse_tree(tree, root)?),
        Command::Homsheaf { tree, alpha, beta } => finish(homsheaf(f, opts, &parse_tree(tree, root)?, alpha, beta)?),
        Command::Dualizing { tree } => finish(dualizing(f, opts, &parse_tree(tree, root)?)?),
        Command::Orient { tree } => finish(orient(f, opts, &parse_tree(tree, root)?)),
        Command::Nondegen { tree } => finish(nondegen(f, opts, &parse_tree(tree, root)?)?),
        Command::Comb { spokes, samples, max_dim } => finish(comb(f, opts, *spokes, *samples, *max_dim)?),
        Command::Circle { spokes, samples, max_rank } => finish(circle(f, opts, spokes, *samples, *max_rank)?),
        Command::W1 { space, comb, circle, flip } => {
            let (label, mut sp) = match (space, comb, circle) {
                (Some(path), _, _) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                    (path.display().to_string(), GluedSpace::from_json(&text)?)
                }
                (None, Some(n), _) => (format!("comb:{n}"), build_comb(*n)),
                (None, None, Some(n)) => (format!("circle:{n}"), build_circle(&even_spokes(*n))?),
                _ => return Err(Error::InvalidConfig("one of --space, --comb or --circle is required".into())),
            };
            for &k in flip {
                let o = sp
                    .overlaps
                    .get_mut(k)
                    .ok_or_else(|| Error::InvalidConfig(format!("no overlap {k}")))?;
                o.sign = -o.sign;
            }
            finish(w1_report(opts, &label, flip, &sp)?)
        }
        Command::StokesLink { rank, slope, half_integer } => finish(stokes(opts, *rank, *slope, *half_integer)?),
        Command::Sweep => finish(sweep(f, opts)?),
    })
}

fn enumerate(opts: &Options, rt: &RootedTree) -> Report {
    let t = rt.tree();
    let mut r = Report::new("enumerate", tree_config(opts, rt));
    let corrs = enumerate_correspondences(t);
    r.data("correspondences", corrs.iter().map(|c| c.to_spec(t)).collect::<Vec<_>>());
    r.data("count", corrs.len());
    let c = verify::correspondence_count(t);
    r.check("count_formula", c.pass, c.detail);
    r
}

fn nerve(opts: &Options, rt: &RootedTree) -> (String, bool) {
    let n = Nerve::new(rt.tree());
    if opts.format == Format::Dot {
        return (n.to_dot(), n.boundary_squares_to_zero());
    }
    let mut r = Report::new("nerve", tree_config(opts, rt));
    let c = verify::nerve_counts(rt.tree());
    r.check("nerve", c.pass, c.detail);
    finish(r)
}

fn homsheaf<F: Field>(f: &F, opts: &Options, rt: &RootedTree, alpha: &str, beta: &str) -> Result<Report> {
    let t = rt.tree();
    let (a, b) = (t.index_of(alpha)?, t.index_of(beta)?);
    let ns = NadlerSheaf::new(rt);
    let arb = ns.arb();
    let nerve = Nerve::from_arb(ns.arb_arc());
    let supp = nerve.hom_support(rt, alpha, beta)?;
    let h = ns.hom_sheaf(f, &ProjComplex::projective(a, 0), &ProjComplex::projective(b, 0));
    let mut r = Report::new("homsheaf", base_config(opts, json!({ "tree": rt.to_compact(), "alpha": alpha, "beta": beta })));
    let mut stalks = BTreeMap::new();
    let mut bad = Vec::new();
    for p in 0..arb.len() {
        let dims = h.stalk(p).cohomology_dims(f);
        let want: BTreeMap<i64, usize> = if supp.contains(p) { [(0, 1)].into_iter().collect() } else { BTreeMap::new() };
        if dims != want {
            bad.push(arb.label(p));
        }
        stalks.insert(arb.label(p), dims);
    }
    r.data("stalks", stalks);
    r.data("support", supp.iter().map(|p| arb.label(p)).collect::<Vec<_>>());
    r.check("rank_one_on_support", bad.is_empty(), bad);
    Ok(r)
}

fn dualizing<F: Field>(f: &F, opts: &Options, rt: &RootedTree) -> Result<Report> {
    let ns = NadlerSheaf::new(rt);
    let nerve = Arc::new(Nerve::from_arb(ns.arb_arc()));
    let mut r = Report::new("dualizing", tree_config(opts, rt));
    let om = ns.omega(f);
    let labelled: BTreeMap<String, _> =
        om.stalk_dims(f).into_iter().map(|(p, d)| (ns.arb().label(p), d)).collect();
    r.data("omega_stalks", labelled);
    let cert = omega_certificate(f, &ns, &nerve)?;
    r.check("omega_vs_dual_of_constant", cert.passed(), cert);
    Ok(r)
}

fn orient<F: Field>(f: &F, opts: &Options, rt: &RootedTree) -> Report {
    let ns = NadlerSheaf::new(rt);
    let mut r = Report::new("orient", tree_config(opts, rt));
    let rep = orientation_report(f, &ns, opts.orientation_sign);
    r.check("orientation", rep.passed(), rep);
    r
}

fn nondegen<F: Field>(f: &F, opts: &Options, rt: &RootedTree) -> Result<Report> {
    let ns = NadlerSheaf::new(rt);
    let nerve = Arc::new(Nerve::from_arb(ns.arb_arc()));
    let mut r = Report::new("nondegen", tree_config(opts, rt));
    for rep in pairing_reports(f, &ns, &nerve, &[opts.orientation_sign])? {
        r.check("nondegeneracy", rep.verdict, rep);
    }
    let supp = hom_support_check(f, &ns);
    r.check("hom_supports", supp.is_empty(), supp);
    Ok(r)
}

fn rng_for(opts: &Options, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(opts.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn comb<F: Field>(f: &F, opts: &Options, spokes: usize, samples: usize, max_dim: usize) -> Result<Report> {
    if spokes == 0 {
        return Err(Error::InvalidConfig("--spokes must be positive".into()));
    }
    let mut r = Report::new(
        "comb",
        base_config(opts, json!({ "spokes": spokes, "samples": samples, "max_dim": max_dim })),
    );
    let mut rng = rng_for(opts, 1);
    let mut failures = Vec::new();
    for i in 0..samples {
        let a = random_filtered(f, &mut rng, spokes, max_dim);
        let b = random_filtered(f, &mut rng, spokes, max_dim);
        let e = relative_euler_check(f, &a, &b)?;
        if !e.passed {
            failures.push(json!({ "sample": i, "result": e }));
        }
    }
    r.check("relative_euler", failures.is_empty(), json!({ "samples": samples, "failures": failures }));
    let cocycle = w1(&build_comb(spokes))?;
    r.check("comb_orientable", cocycle.trivial, cocycle);
    Ok(r)
}

fn even_spokes(n: usize) -> Vec<Spoke> {
    (0..n).map(|i| Spoke { position: i as f64 / n as f64, coorientation: 1 }).collect()
}

fn parse_spokes(s: &str) -> Result<Vec<Spoke>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|item| {
            let (pos, sign) = item.split_once(':').unwrap_or((item, "+"));
            let position: f64 =
                pos.parse().map_err(|_| Error::Parse(format!("bad spoke position `{pos}`")))?;
            let coorientation = match sign {
                "+" | "1" | "+1" => 1,
                "-" | "-1" => -1,
                _ => return Err(Error::Parse(format!("bad spoke sign `{sign}`"))),
            };
            Ok(Spoke { position, coorientation })
        })
        .collect()
}

fn circle<F: Field>(f: &F, opts: &Options, spokes: &str, samples: usize, max_rank: usize) -> Result<Report> {
    if max_rank == 0 {
        return Err(Error::InvalidConfig("--max-rank must be positive".into()));
    }
    let sp = parse_spokes(spokes)?;
    let space = build_circle(&sp)?;
    let mut r = Report::new(
        "circle",
        base_config(opts, json!({ "spokes": spokes, "samples": samples, "max_rank": max_rank })),
    );
    let mut rng = rng_for(opts, 2);
    let mut failures = Vec::new();
    for i in 0..samples {
        let x = random_local_system(f, &mut rng, max_rank);
        let y = random_local_system(f, &mut rng, max_rank);
        let d = circle_duality(f, &x, &y)?;
        if !d.swapped {
            failures.push(json!({ "sample": i, "result": d }));
        }
    }
    r.check("duality_swap", failures.is_empty(), json!({ "samples": samples, "failures": failures }));
    r.data("w1", w1(&space)?);
    Ok(r)
}

fn w1_report(opts: &Options, label: &str, flip: &[usize], sp: &GluedSpace) -> Result<Report> {
    sp.validate()?;
    let mut r = Report::new("w1", base_config(opts, json!({ "space": label, "flip": flip })));
    let c = w1(sp)?;
    r.data("orientable", c.trivial);
    r.check("cocycle", true, c);
    Ok(r)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn stokes(opts: &Options, rank: usize, slope: usize, half_integer: bool) -> Result<Report> {
    let link = irregular_type_to_link(rank, slope, half_integer)?;
    let mut r = Report::new(
        "stokes-link",
        base_config(opts, json!({ "rank": rank, "slope": slope, "half_integer": half_integer })),
    );
    let k = if half_integer { slope } else { 2 * slope };
    let want = gcd(rank, k);
    r.check("components_gcd", link.components == want, json!({ "expected": want, "link": link }));
    Ok(r)
}

fn sweep<F: Field>(f: &F, opts: &Options) -> Result<Report> {
    let mut r = Report::new("sweep", base_config(opts, json!({})));
    let trees = rooted_trees_up_to(opts.max_tree_size);
    let signs = [1, -1];
    let per_tree: Vec<(String, Value, bool)> = trees
        .par_iter()
        .map(|rt| -> Result<(String, Value, bool)> {
            let t = rt.tree();
            let count = verify::correspondence_count(t);
            let nerve = verify::nerve_counts(t);
            let hh = verify::hochschild_vanishing(f, rt, opts.degree_bound);
            let hc = verify::cyclic_trivial_mixed(f, rt, opts.degree_bound);
            let fun = verify::functoriality(f, rt);
            let sheaf = verify::sheaf_checks(f, rt, &signs)?;
            let pass = count.pass && nerve.pass && hh.pass && hc.pass && fun.pass && sheaf.pass();
            let detail = json!({
                "correspondences": count,
                "nerve": nerve,
                "hochschild": hh,
                "cyclic": hc,
                "functoriality": fun,
                "omega": sheaf.omega.pass,
                "orientation": sheaf.orientation.pass,
                "hom_supports": sheaf.hom_support_failures,
                "nondegeneracy": sheaf.nondegeneracy.iter().map(|v| v.pass).collect::<Vec<_>>(),
                "pass": pass,
            });
            Ok((rt.to_compact(), detail, pass))
        })
        .collect::<Result<_>>()?;
    let all = per_tree.iter().all(|x| x.2);
    let failed: Vec<&str> = per_tree.iter().filter(|x| !x.2).map(|x| x.0.as_str()).collect();
    r.check("trees", all, json!({ "checked": per_tree.len(), "failed": failed }));
    r.data("per_tree", per_tree.into_iter().map(|(k, v, _)| (k, v)).collect::<BTreeMap<_, _>>());

    let comb = comb(f, opts, 2, 50, 3)?;
    r.check("comb", comb.verdict(), comb.to_value()["checks"].clone());
    let circ = circle(f, opts, "0.25:+,0.75:-", 50, 3)?;
    r.check("circle", circ.verdict(), circ.to_value()["checks"].clone());

    let mut links = Vec::new();
    for n in 1..=6 {
        for s in 1..=6 {
            for half in [false, true] {
                let l = irregular_type_to_link(n, s, half)?;
                let want = gcd(n, if half { s } else { 2 * s });
                if l.components != want {
                    links.push(format!("({n}, {s}, {half}): {} vs {want}", l.components));
                }
            }
        }
    }
    let trefoil = irregular_type_to_link(2, 3, true)?.components == 1;
    r.check("stokes_links", links.is_empty() && trefoil, json!({ "trefoil_one_component": trefoil, "mismatches": links }));

    let mut w = BTreeMap::new();
    for n in 1..=4 {
        w.insert(format!("comb:{n}"), w1(&build_comb(n))?.trivial);
    }
    let mut flipped = build_circle(&even_spokes(2))?;
    flipped.overlaps[0].sign = -flipped.overlaps[0].sign;
    let flip_nontrivial = !w1(&flipped)?.trivial;
    let circ_trivial = w1(&build_circle(&even_spokes(2))?)?.trivial;
    let w_ok = w.values().all(|&x| x) && circ_trivial && flip_nontrivial;
    r.check("w1", w_ok, json!({ "combs": w, "circle_2": circ_trivial, "circle_2_flipped_nontrivial": flip_nontrivial }));

    Ok(r)
}
