//! Acceptance criteria on the one-loop example and the oracle/property
//! sweeps, one test per criterion.

mod common;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use common::{
    brute_2factors, brute_2forests, brute_cycles, brute_spanning_trees, components, corpus, one_loop, random_graphs,
    ONE_LOOP,
};
use corolla_core::corolla::{
    a_operator, apply_differential, b_tensor, corolla, corolla_differential, corolla_summand, CorollaPolynomial,
    DifferentialOperator, HalfEdgeVar, Sign, Variant, COLOR_TOKEN,
};
use corolla_core::electroweak::{
    coupling_product, enumerate_labelings, gauge_boson_labelings, j_factor, parse_rules, scalar_sets, ExternalPolicy,
};
use corolla_core::expr::json::{from_json, to_json};
use corolla_core::expr::numeric::NumericPoint;
use corolla_core::expr::render::render;
use corolla_core::expr::{
    q, Expression, Format, IndexName, PolyTensor, Polynomial, Quadric, Ratio, Routing, Slot, TensorAtom, TensorProduct,
};
use corolla_core::graph::{
    all_cycles, disjoint_cycle_tuples, parse_graph, spanning_2forests, spanning_trees, symmetry_factor, two_factors,
    EdgeSet, FeynmanGraph, HalfEdge,
};
use corolla_core::parametric::{first_symanzik, internal_schwingers, parametric_integrand, second_symanzik};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn a(k: usize) -> Polynomial {
    Polynomial::named(&format!("A{k}"))
}

fn xi(k: usize) -> Slot {
    Slot::new(&format!("xi{k}"))
}

fn mu(k: usize) -> IndexName {
    IndexName::new(&format!("mu{k}"))
}

fn he(g: &FeynmanGraph, v: &str, e: &str) -> HalfEdge {
    HalfEdge { vertex: g.vertex_index(v).unwrap(), edge: g.edge_index(e).unwrap() }
}

fn routing() -> Routing {
    Routing::new().with("xi1", &[]).with("xi2", &[(1, "q")]).with("xi3", &[(1, "q")]).with("xi4", &[(-1, "q")])
}

fn scalar(p: Polynomial) -> Expression {
    Expression::from_poly(p)
}

fn tensor(c: Polynomial, atoms: Vec<TensorAtom>) -> Expression {
    Expression::term(Ratio::from_poly(c), TensorProduct::from_atoms(atoms), None)
}

fn dot(x: &Slot, y: &Slot) -> TensorAtom {
    TensorAtom::dot(x.clone(), y.clone())
}

#[test]
fn criterion_01_one_loop_psi() {
    assert_eq!(first_symanzik(&one_loop()).unwrap(), &a(1) + &a(2));
}

#[test]
fn criterion_02_one_loop_phi() {
    let g = one_loop();
    let w = &a(1) * &a(2);
    let mut expected = PolyTensor::zero();
    expected.add_term(TensorProduct::atom(dot(&xi(1), &xi(1))), w.clone());
    expected.add_term(TensorProduct::atom(dot(&xi(2), &xi(2))), w.clone());
    expected.add_term(TensorProduct::atom(dot(&xi(1), &xi(2))), w.scale(&q(-2)));
    assert_eq!(second_symanzik(&g).unwrap(), expected);

    // Swapping the two vertex names swaps the components of every 2-forest.
    let swapped = parse_graph(&ONE_LOOP.replace("v a\nv b\n", "v b\nv a\n")).unwrap();
    assert_eq!(second_symanzik(&swapped).unwrap(), expected);
}

#[test]
fn criterion_03_one_loop_integrand() {
    let g = parse_graph(&format!("{ONE_LOOP}mass 1 m1\nmass 2 m2\nmass 3 m3\nmass 4 m4\n")).unwrap();
    let m2 = |k: usize| Polynomial::named(&format!("m{k}")).pow(2);
    let psi = &a(1) + &a(2);

    let inverse = |k: usize| tensor(Polynomial::one(), vec![dot(&xi(k), &xi(k))]).add(&scalar(m2(k)));
    let prefactor = inverse(3).mul(&inverse(4));

    let w = &a(1) * &a(2);
    let mut num = PolyTensor::zero();
    num.add_term(TensorProduct::atom(dot(&xi(1), &xi(1))), w.clone());
    num.add_term(TensorProduct::atom(dot(&xi(2), &xi(2))), w.clone());
    num.add_term(TensorProduct::atom(dot(&xi(1), &xi(2))), w.scale(&q(-2)));
    let mut affine = PolyTensor::zero();
    affine.add_term(TensorProduct::atom(dot(&xi(3), &xi(3))), a(3));
    affine.add_term(TensorProduct::atom(dot(&xi(4), &xi(4))), a(4));
    let masses = (1..=4).fold(Polynomial::zero(), |acc, k| &acc + &(&a(k) * &m2(k)));
    affine.add_term(TensorProduct::scalar(), masses);
    let body = Expression::term(
        Ratio::from_factors(Polynomial::one(), vec![(psi.clone(), 2)]),
        TensorProduct::scalar(),
        Quadric::new(num, psi.clone(), affine),
    );

    let pi = parametric_integrand(&g).unwrap();
    assert_eq!(pi.psi, psi);
    assert_eq!(pi.prefactor, prefactor);
    assert_eq!(pi.body, body);
    assert_eq!(pi.full(), prefactor.mul(&body));
}

fn vertex_sum(hs: &[HalfEdge]) -> CorollaPolynomial {
    let mut out = CorollaPolynomial::zero();
    for &h in hs {
        let a_sum = CorollaPolynomial::var(HalfEdgeVar::A(h, Sign::Plus))
            .add(&CorollaPolynomial::var(HalfEdgeVar::A(h, Sign::Minus)));
        out = out.add(&CorollaPolynomial::var(HalfEdgeVar::B(h)).mul(&a_sum));
    }
    out
}

/// Half-edges at `a` and at `b`, in the order alpha..gamma, delta..zeta.
fn half_edges(g: &FeynmanGraph) -> [HalfEdge; 6] {
    [he(g, "a", "3"), he(g, "a", "2"), he(g, "a", "1"), he(g, "b", "4"), he(g, "b", "1"), he(g, "b", "2")]
}

fn expected_c1(g: &FeynmanGraph) -> CorollaPolynomial {
    let [alpha, _, _, delta, _, _] = half_edges(g);
    let mut c1 = CorollaPolynomial::zero();
    for k in [Sign::Plus, Sign::Minus] {
        c1.add_term(1, vec![HalfEdgeVar::A(alpha, k), HalfEdgeVar::A(delta, k)], Expression::one());
    }
    c1
}

#[test]
fn criterion_04_one_loop_corolla_polynomial() {
    let g = one_loop();
    let h = half_edges(&g);
    let c0 = vertex_sum(&h[..3]).mul(&vertex_sum(&h[3..]));
    assert_eq!(c0.len(), 36);
    assert_eq!(corolla_summand(&g, 0), c0);
    assert_eq!(corolla_summand(&g, 1), expected_c1(&g));
    for i in 2..5 {
        assert!(corolla_summand(&g, i).is_zero());
    }
    assert_eq!(corolla(&g, Variant::Plain), c0.sub(&expected_c1(&g)));
}

#[test]
fn criterion_05_one_loop_corolla_differential() {
    let g = one_loop();
    let h = half_edges(&g);
    // (half-edge, sign) -> (numerator, A / xi label, mu label) of n/(2 A) d/dxi^mu.
    let table: [(usize, Sign, i64, usize, usize); 12] = [
        (0, Sign::Plus, 1, 2, 3),
        (0, Sign::Minus, 1, 1, 3),
        (1, Sign::Plus, -1, 1, 2),
        (1, Sign::Minus, 1, 3, 2),
        (2, Sign::Plus, -1, 3, 1),
        (2, Sign::Minus, -1, 2, 1),
        (3, Sign::Plus, 1, 1, 4),
        (3, Sign::Minus, 1, 2, 4),
        (4, Sign::Plus, -1, 2, 1),
        (4, Sign::Minus, 1, 4, 1),
        (5, Sign::Plus, -1, 4, 2),
        (5, Sign::Minus, -1, 1, 2),
    ];
    let metrics: [(usize, usize); 6] = [(2, 1), (1, 3), (3, 2), (1, 2), (2, 4), (4, 1)];

    let mut a_ops = BTreeMap::new();
    for (k, s, n, e, m) in table {
        let op = (Ratio::new(Polynomial::integer(n), a(e).scale(&q(2))), (xi(e), mu(m)));
        assert_eq!(a_operator(&g, h[k], s), op, "{} {s:?}", g.half_edge_label(h[k]));
        a_ops.insert((h[k], s), op);
    }
    let mut b_ops = BTreeMap::new();
    for (k, (x, y)) in metrics.into_iter().enumerate() {
        let t = TensorAtom::metric(mu(x), mu(y));
        assert_eq!(b_tensor(&g, h[k]), t, "{}", g.half_edge_label(h[k]));
        b_ops.insert(h[k], t);
    }

    // Substitute the table into C by hand and compare operators.
    let c = corolla(&g, Variant::Plain);
    let mut expected = DifferentialOperator::zero();
    for (_, mono, coeff) in c.terms() {
        let mut factor = coeff.clone();
        let mut derivs = Vec::new();
        let mut atoms = Vec::new();
        for v in mono {
            match v {
                HalfEdgeVar::A(h, s) => {
                    let (r, d) = &a_ops[&(*h, *s)];
                    factor = factor.mul(&Expression::from_ratio(r.clone()));
                    derivs.push(d.clone());
                }
                HalfEdgeVar::B(h) => atoms.push(b_ops[h].clone()),
            }
        }
        expected.add_summand(derivs, TensorProduct::from_atoms(atoms), factor);
    }
    assert_eq!(corolla_differential(&g, &c), expected);
}

#[test]
fn criterion_06_one_loop_gauge_factor() {
    let g = one_loop();
    let d = corolla_differential(&g, &corolla(&g, Variant::Qcd));
    let app = apply_differential(&g, &d, &routing()).unwrap();
    assert!(!app.gauge_factor.has_exponential());

    let qs = Slot::new("q");
    let psi = &a(1) + &a(2);
    let sq = |x: i64, y: i64, z: i64| {
        &(&a(1).pow(2).scale(&q(x)) + &a(2).pow(2).scale(&q(y))) + &(&a(1) * &a(2)).scale(&q(z))
    };
    let over_psi = |p: Polynomial, k: u32| Ratio::from_factors(p, vec![(psi.clone(), k)]);
    let eta = TensorAtom::metric(mu(3), mu(4));
    let qq = Expression::term(
        over_psi(sq(2, 2, 12).scale(&q(8)), 2),
        TensorProduct::from_atoms(vec![TensorAtom::Mom(qs.clone(), mu(3)), TensorAtom::Mom(qs.clone(), mu(4))]),
        None,
    );
    let q2eta = Expression::term(
        over_psi(sq(5, 5, 8).scale(&q(-8)), 2),
        TensorProduct::from_atoms(vec![dot(&qs, &qs), eta.clone()]),
        None,
    );
    let eta_term = Expression::term(over_psi(Polynomial::one(), 1), TensorProduct::atom(eta), None);
    let prefactor = tensor(Polynomial::named("gs").pow(2), vec![TensorAtom::Token(COLOR_TOKEN.into())]);
    let expected = prefactor.mul(&qq.add(&q2eta).add(&eta_term));
    assert!(
        app.gauge_factor == expected,
        "\ncomputed: {}\nexpected: {}",
        render(&app.gauge_factor, Format::Text),
        render(&expected, Format::Text)
    );
}

#[test]
fn criterion_07_one_loop_gauge_labelings() {
    let g = one_loop();
    let ls = gauge_boson_labelings(&g);
    assert_eq!(ls.len(), 8);
    let mut by_factor: BTreeMap<EdgeSet, usize> = BTreeMap::new();
    for l in &ls {
        *by_factor.entry(l.w_factor.edges.clone()).or_default() += 1;
    }
    assert_eq!(by_factor.len(), 3);
    let mut sizes: Vec<usize> = by_factor.values().copied().collect();
    sizes.sort_unstable();
    assert_eq!(sizes, [2, 2, 4]);

    let cycle: EdgeSet = ["1", "2"].iter().map(|id| g.edge_index(id).unwrap()).collect();
    let sym = symmetry_factor(&g, None);
    assert_eq!(sym, 2);
    for l in &ls {
        let expected = if l.w_factor.edges == cycle { (2, 1) } else { (1, 2) };
        assert_eq!((l.sym, l.iso), expected, "{:?}", l.labels(&g));
        assert_eq!(sym, l.sym * l.iso);
    }
}

#[test]
fn criterion_08_one_loop_j_factor() {
    let g = one_loop();
    let (e, gcw) = (Polynomial::named("e"), &Polynomial::named("g") * &Polynomial::named("cW"));
    let (mw, mz) = (Polynomial::named("mW").pow(2), Polynomial::named("mZ").pow(2));
    let sum = |ks: &[usize]| ks.iter().fold(Polynomial::zero(), |acc, &k| &acc + &a(k));
    let term = |c: Polynomial, w: &[usize], z: &[usize]| {
        let m = &(&sum(w) * &mw) + &(&sum(z) * &mz);
        Expression::term(Ratio::from_poly(c), TensorProduct::scalar(), Quadric::affine_only(PolyTensor::scalar(m)))
    };
    let e2 = e.pow(2);
    let gcw2 = gcw.pow(2);
    let egcw = &e * &gcw;
    let displayed = [
        term(e2.clone(), &[2, 3, 4], &[]),
        term(gcw2.clone(), &[2, 3, 4], &[1]),
        term(e2.clone(), &[1, 3, 4], &[]),
        term(gcw2.clone(), &[1, 3, 4], &[2]),
        term(e2, &[1, 2], &[]),
        term(egcw.clone(), &[1, 2], &[4]),
        term(egcw, &[1, 2], &[3]),
        term(gcw2, &[1, 2], &[3, 4]),
    ];
    let qcd = tensor(-Polynomial::named("gs").pow(2), vec![TensorAtom::Token(COLOR_TOKEN.into())]);
    let paper = displayed.iter().fold(qcd, |acc, t| acc.add(t));
    let j = j_factor(&g).unwrap();
    assert_eq!(j.len(), 9);
    // Powers of i are kept: i^|E| = 1 on the QCD term and i^(|V|+|E|) = -1 on
    // the rest, so the whole factor comes out negated.
    assert_eq!(j, paper.neg(), "\n{}", render(&j, Format::Text));
}

#[test]
fn criterion_09_one_loop_scalar_sets() {
    let g = one_loop();
    let ids = |s: &EdgeSet| s.iter().map(|&e| g.edge(e).id.clone()).collect::<String>();
    let sets = scalar_sets(&g, &[]);
    let mut by_p: BTreeMap<String, usize> = BTreeMap::new();
    for s in &sets {
        *by_p.entry(ids(&s.p_hg)).or_default() += 1;
    }
    assert_eq!(by_p.len(), 16);
    let mut sizes: Vec<usize> = by_p.values().copied().collect();
    sizes.sort_unstable();
    let mut expected = vec![1; 13];
    expected.extend([2, 2, 3]);
    assert_eq!(sizes, expected);

    let tuple = disjoint_cycle_tuples(&g, 1).remove(0);
    let ghost_ps: BTreeSet<String> = scalar_sets(&g, &tuple).iter().map(|s| ids(&s.p_hg)).collect();
    assert_eq!(ghost_ps, ["", "3", "4", "34"].iter().map(|s| s.to_string()).collect());

    let mut found = BTreeSet::new();
    for s in sets.iter().filter(|s| s.p4.is_empty()) {
        for (e, [x, y]) in &s.h2 {
            found.insert((ids(&s.p_hg), g.edge(*e).id.clone(), g.half_edge_label(*x), g.half_edge_label(*y)));
        }
    }
    let expected: BTreeSet<(String, String, String, String)> = [
        ("12", "1", "(a,3)", "(b,4)"),
        ("12", "2", "(a,3)", "(b,4)"),
        ("134", "1", "(a,2)", "(b,2)"),
        ("234", "2", "(a,1)", "(b,1)"),
    ]
    .iter()
    .map(|(a, b, c, d)| (a.to_string(), b.to_string(), c.to_string(), d.to_string()))
    .collect();
    assert_eq!(found, expected);
}

#[test]
fn criterion_10_scalar_edge_labelings() {
    let g = one_loop();
    let rules = parse_rules(&common::read_data("rules/standard-model.rules")).unwrap();
    let p: EdgeSet = [g.edge_index("1").unwrap()].into_iter().collect();
    let s = scalar_sets(&g, &[]).into_iter().find(|s| s.p_hg == p && s.p4.is_empty()).unwrap();
    let ls = enumerate_labelings(&g, &s, &rules, ExternalPolicy::Uniform);
    assert_eq!(ls.len(), 6);
    let mut couplings: Vec<String> =
        ls.iter().map(|l| render(&coupling_product(&g, l, &s, &rules).unwrap(), Format::Text)).collect();
    couplings.sort();
    assert_eq!(couplings, ["e^2 mW^2", "e^2 mW^2", "g^2 mW^2", "g^2 mZ^2 sW^4", "g^2 mZ^2 sW^4", "g^2 mZ^2/cW^2"]);
}

#[test]
fn criterion_11_oracle_suites() {
    let graphs = random_graphs(0xACCE, 50, 8);
    assert_eq!(graphs.len(), 50);
    for g in &graphs {
        assert!(g.internal_edges().len() <= 8);
        let trees: BTreeSet<EdgeSet> = spanning_trees(g).unwrap().into_iter().collect();
        assert_eq!(trees, brute_spanning_trees(g), "\n{g}");
        let forests: BTreeSet<_> = spanning_2forests(g)
            .into_iter()
            .map(|f| (f.edges, [f.first, f.second].into_iter().collect::<BTreeSet<_>>()))
            .collect();
        assert_eq!(forests, brute_2forests(g), "\n{g}");
        let factors: BTreeSet<EdgeSet> = two_factors(g).into_iter().map(|f| f.edges).collect();
        assert_eq!(factors, brute_2factors(g), "\n{g}");
        let cycles: BTreeSet<EdgeSet> = all_cycles(g).into_iter().map(|c| c.edges).collect();
        assert_eq!(cycles, brute_cycles(g), "\n{g}");
        assert_eq!(components(g, &EdgeSet::new()).len(), g.vertex_count());
    }
}

fn numeric_point(g: &FeynmanGraph, rng: &mut StdRng) -> NumericPoint {
    let mut scalars: HashMap<_, _> = internal_schwingers(g).into_iter().map(|s| (s, rng.gen_range(0.3..1.5))).collect();
    for e in g.external_edges() {
        scalars.insert(g.schwinger(e), rng.gen_range(0.3..1.5));
    }
    let momenta =
        (0..g.edges().len()).map(|e| (g.momentum(e), std::array::from_fn(|_| rng.gen_range(-0.7..0.7)))).collect();
    NumericPoint { scalars, momenta, indices: HashMap::new() }
}

#[test]
fn criterion_12_property_suites() {
    let graphs: Vec<FeynmanGraph> = corpus();
    let small: Vec<&FeynmanGraph> = graphs.iter().filter(|g| g.vertex_count() <= 4).collect();
    let mut rng = StdRng::seed_from_u64(12);

    for g in &graphs {
        let l = g.loop_number() as u32;
        let syms = internal_schwingers(g);
        assert!(first_symanzik(g).unwrap().is_homogeneous_in(&syms, l), "\n{g}");
        let phi = second_symanzik(g).unwrap();
        assert!(phi.is_zero() || phi.is_homogeneous_in(&syms, l + 1), "\n{g}");
    }

    for g in &small {
        let n = g.vertex_count();
        for i in 0..=g.loop_number() + 1 {
            let tuples = disjoint_cycle_tuples(g, i);
            let c = corolla_summand(g, i);
            assert_eq!(c.is_zero(), tuples.is_empty(), "i = {i}\n{g}");
            for (_, mono, _) in c.terms() {
                let mut a_per = vec![0; n];
                let mut b_per = vec![0; n];
                for v in mono {
                    match v {
                        HalfEdgeVar::A(h, _) => a_per[h.vertex] += 1,
                        HalfEdgeVar::B(h) => b_per[h.vertex] += 1,
                    }
                }
                assert!(a_per.iter().all(|&k| k == 1));
                assert_eq!(b_per.iter().filter(|&&k| k == 1).count(), n - b_per.iter().filter(|&&k| k == 0).count());
                let ghosts = b_per.iter().filter(|&&k| k == 0).count();
                assert!(tuples.iter().any(|t| t.iter().map(|c| c.vertices.len()).sum::<usize>() == ghosts));
            }
        }
    }

    for g in graphs.iter().filter(|g| g.vertex_count() <= 3) {
        let full = parametric_integrand(g).unwrap().full();
        assert_eq!(from_json(&to_json(&full)).unwrap(), full);
        let pt = numeric_point(g, &mut rng);
        for e in 0..g.edges().len() {
            let comp = rng.gen_range(0..4);
            let rho = IndexName::new("rho");
            let mut at = pt.clone();
            at.indices.insert(rho.clone(), comp);
            let slot = g.momentum(e);
            let exact = at.eval(&full.differentiate(&slot, &rho));
            let h = 1e-5;
            let shifted = |d: f64| {
                let mut p = at.clone();
                p.momenta.get_mut(&slot).unwrap()[comp] += d;
                p.eval(&full)
            };
            let fd = (shifted(h) - shifted(-h)) / (2.0 * h);
            let scale = exact.abs().max(fd.abs()).max(at.eval(&full).abs()).max(1e-12);
            assert!((exact - fd).abs() / scale < 1e-6, "exact {exact} fd {fd}\n{g}");
        }
    }

    let g = one_loop();
    let d = corolla_differential(&g, &corolla(&g, Variant::Plain));
    let app = apply_differential(&g, &d, &routing()).unwrap();
    for e in [&app.full, &app.gauge_factor, &app.integrand] {
        assert_eq!(&from_json(&to_json(e)).unwrap(), e);
    }
}
