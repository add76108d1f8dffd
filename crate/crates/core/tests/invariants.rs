use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wsat_core::count_matroid::CountMatroid;
use wsat_core::field::DEFAULT_PRIME;
use wsat_core::hyper_tools::{clique_wsat_formula, sharpness};
use wsat_core::io::{parse_any, to_json, to_text};
use wsat_core::linear_matroid::{hyper_clique_assignment, hyperconnectivity};
use wsat_core::matroid::{certify, preservation_check, MatroidOracle, Restriction};
use wsat_core::patterns::{make_biclique, make_clique, make_cycle, make_dumbbell};
use wsat_core::percolation::{hyper_construction, is_weakly_saturated, join_construction};
use wsat_core::solver::{wsat_bnb, wsat_exhaustive, SolveOptions};
use wsat_core::{Error, PatternFamily, UniformHypergraph};

fn single(f: UniformHypergraph) -> PatternFamily {
    PatternFamily::single(f).unwrap()
}

#[test]
fn clique_formula_matches_exhaustive() {
    for (n, r, s) in [(4, 2, 3), (5, 2, 3), (4, 3, 4), (5, 3, 4)] {
        let rep = wsat_exhaustive(&make_clique(n, r).unwrap(), &single(make_clique(s, r).unwrap())).unwrap();
        assert_eq!(rep.value, Some(clique_wsat_formula(n, r, s).unwrap() as usize), "({n},{r},{s})");
    }
}

#[test]
fn constructions_percolate() {
    for f in [make_clique(3, 2).unwrap(), make_cycle(4).unwrap(), make_biclique(2, 2).unwrap(), make_dumbbell(3).unwrap()] {
        for n in f.n() + 2..=f.n() + 3 {
            let h = join_construction(n, &f).unwrap();
            assert!(is_weakly_saturated(&make_clique(n, 2).unwrap(), &h, &single(f.clone())).unwrap());
        }
    }
    for (n, r, s) in [(5, 3, 4), (6, 3, 4), (6, 3, 5)] {
        let f = make_clique(s, r).unwrap();
        let sh = sharpness(&f).unwrap().value;
        let h = hyper_construction(n, &f, sh).unwrap();
        assert!(is_weakly_saturated(&make_clique(n, r).unwrap(), &h, &single(f)).unwrap());
    }
}

#[test]
fn bounds_never_exceed_exact_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let patterns = [make_clique(3, 2).unwrap(), make_cycle(4).unwrap()];
    for _ in 0..12 {
        let n = rng.gen_range(4..=6);
        let edges: Vec<Vec<u32>> = make_clique(n, 2)
            .unwrap()
            .edges()
            .iter()
            .filter(|_| rng.gen_bool(0.8))
            .map(|e| e.vertices().to_vec())
            .collect();
        let host = UniformHypergraph::from_edges(2, n, edges).unwrap();
        if host.edge_count() == 0 {
            continue;
        }
        let f = patterns[rng.gen_range(0..patterns.len())].clone();
        let family = single(f.clone());
        let exact = wsat_bnb(&host, &family, &[], SolveOptions::default()).unwrap().value.unwrap();
        for q in 1..=2 {
            let cm = CountMatroid::new(&host, q).unwrap();
            if let Ok(cert) = certify(&cm, &host, &family) {
                assert!(cert.rank <= exact);
            }
        }
    }
}

#[test]
fn vertex_deletion_keeps_cycles() {
    let k6 = make_clique(6, 2).unwrap();
    let family = single(make_clique(4, 2).unwrap());
    let va = hyperconnectivity(6, 2, DEFAULT_PRIME, 0).unwrap();
    let restricted = Restriction::avoiding_vertex(&va, 5);
    let k5 = restricted.ground().host().clone();
    assert_eq!(k5.edge_count(), 10);
    let cert = certify(&restricted, &k5, &family).unwrap();
    assert_eq!(cert.rank, clique_wsat_formula(5, 2, 4).unwrap() as usize);
    let seed = wsat_bnb(&k6, &family, &[&va], SolveOptions::default()).unwrap().certificate;
    assert!(preservation_check(&va, &k6, &family, &seed).unwrap());
}

#[test]
fn hypergraph_assignment_matches_solver() {
    let host = make_clique(5, 3).unwrap();
    let family = single(make_clique(4, 3).unwrap());
    let va = hyper_clique_assignment(5, 3, 4, DEFAULT_PRIME, 2).unwrap();
    let rep = wsat_bnb(&host, &family, &[&va], SolveOptions::default()).unwrap();
    assert_eq!((rep.value, rep.lower), (Some(6), 6));
}

#[test]
fn unverified_oracles_are_rejected() {
    let host = make_clique(4, 2).unwrap();
    let family = single(make_clique(3, 2).unwrap());
    let too_loose = CountMatroid::new(&host, 2).unwrap();
    assert!(matches!(
        wsat_bnb(&host, &family, &[&too_loose], SolveOptions::default()),
        Err(Error::Unverified(_))
    ));
}

#[test]
fn text_and_json_round_trip() {
    let g = UniformHypergraph::from_multiedges(3, 5, [(vec![0, 1, 2], 2), (vec![1, 3, 4], 1)]).unwrap();
    assert_eq!(parse_any(&to_text(&g)).unwrap(), g);
    assert_eq!(parse_any(&to_json(&g)).unwrap(), g);
}
