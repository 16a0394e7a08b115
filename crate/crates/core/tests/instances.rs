use betti::instances::{generate, hyperplane_section, lm_ledger, Family, InstanceSpec, Payload};
use betti::ring::{hilbert_check, DEFAULT_QMAX};
use betti::{Error, FieldContext};

const PRIMES: [u64; 3] = [10007, 31991, 65521];

fn spec(family: Family, genus: Option<u32>, prime: u64, seed: u64) -> InstanceSpec {
    generate(family, genus, FieldContext::new(prime).unwrap(), seed).unwrap()
}

#[test]
fn hilbert_functions_are_stable_across_seeds_and_primes() {
    let families = [
        (Family::CurveCi23G4, None),
        (Family::K3Ci23G4, None),
        (Family::CurveGrassG6, None),
        (Family::K3GrassG6, None),
        (Family::CurveGrassG8, None),
        (Family::K3GrassG8, None),
    ];
    for (family, genus) in families {
        for prime in PRIMES {
            for seed in 1..=3 {
                let s = spec(family, genus, prime, seed);
                let (ring, report) = s.checked_ring(DEFAULT_QMAX).unwrap();
                assert!(report.pass(), "{family} p={prime} seed={seed}");
                assert_eq!(ring.dims().len(), DEFAULT_QMAX + 1);
            }
        }
    }
}

#[test]
fn known_hilbert_functions() {
    let c = spec(Family::CurveCi23G4, None, 31991, 1)
        .build_ring(3)
        .unwrap();
    assert_eq!(c.dims(), &[1, 4, 9, 15]);
    let k = spec(Family::K3Ci23G4, None, 31991, 1)
        .build_ring(3)
        .unwrap();
    assert_eq!(k.dims(), &[1, 5, 14, 29]);
    let g6 = spec(Family::CurveGrassG6, None, 31991, 1)
        .build_ring(2)
        .unwrap();
    assert_eq!(g6.dims(), &[1, 6, 15]);
}

#[test]
fn tangent_developable_matches_k3_hilbert_function() {
    for g in (4..=12).step_by(2) {
        let s = spec(Family::Tandev, Some(g), 31991, 0);
        let ring = s.build_ring(DEFAULT_QMAX).unwrap();
        let report = hilbert_check(&ring, s.label());
        assert!(report.pass(), "tandev g={g}: {:?}", ring.dims());
        assert_eq!(ring.dim(2), 4 * (g as usize - 1) + 2);
    }
}

#[test]
fn hyperplane_sections_are_canonical_curves() {
    for family in [Family::K3Ci23G4, Family::K3GrassG6, Family::K3GrassG8] {
        for seed in 1..=2 {
            let surface = spec(family, None, 31991, seed);
            let curve = hyperplane_section(&surface, seed + 100).unwrap();
            assert_eq!(Some(curve.family), family.section());
            let (ring, _) = curve.checked_ring(DEFAULT_QMAX).unwrap();
            assert_eq!(ring.r1_dim() as u32, surface.genus);
        }
    }
}

#[test]
fn json_round_trip_is_lossless() {
    for family in Family::ALL {
        let genus = match family {
            Family::Rnc => Some(5),
            Family::Tandev => Some(8),
            _ => None,
        };
        let s = spec(family, genus, 65521, 9);
        let text = s.to_json();
        let back = InstanceSpec::from_json(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_json(), text);
        assert_eq!(
            back.build_ring(3).unwrap().dims(),
            s.build_ring(3).unwrap().dims()
        );
    }
}

#[test]
fn spec_examples() {
    let t = spec(Family::Tandev, Some(10), 31991, 0);
    let Payload::Parametrization(pp) = &t.payload else {
        panic!("tandev is a parametrization")
    };
    assert_eq!((pp.forms.len(), pp.bidegree), (11, [9, 1]));

    let g8 = spec(Family::CurveGrassG8, None, 31991, 7);
    let Payload::Ideal(ip) = &g8.payload else {
        panic!("grassmannian sections are ideals")
    };
    assert_eq!((ip.generators.len(), ip.num_vars), (15, 8));
}

#[test]
fn malformed_payloads_are_rejected() {
    let mut s = spec(Family::CurveCi23G4, None, 31991, 1);
    if let Payload::Ideal(ip) = &mut s.payload {
        ip.generators[0].degree = 3;
    }
    assert!(matches!(
        s.presentation(),
        Err(Error::NotHomogeneous { .. })
    ));

    let mut s = spec(Family::CurveCi23G4, None, 31991, 1);
    if let Payload::Ideal(ip) = &mut s.payload {
        ip.generators[0].terms[0].e.push(0);
    }
    assert!(matches!(s.presentation(), Err(Error::InvalidInstance(_))));

    let mut s = spec(Family::Rnc, Some(3), 31991, 0);
    s.schema_version = 2;
    assert!(s.presentation().is_err());

    let unknown_key = spec(Family::Rnc, Some(2), 31991, 0).to_json().replacen(
        "\"seed\"",
        "\"extra\": 1,\n  \"seed\"",
        1,
    );
    assert!(InstanceSpec::from_json(&unknown_key).is_err());
}

#[test]
fn ledger_is_consistent_for_even_genera() {
    for g in (4..=20).step_by(2) {
        let l = lm_ledger(g).unwrap();
        assert_eq!(l.check(), Ok(()), "g={g}");
        assert_eq!(l.h0_e, l.k as u64 + 2);
        assert_eq!(l.c2_e, l.k as u64 + 1);
    }
    for g in [5, 9, 21] {
        assert!(matches!(lm_ledger(g), Err(Error::OddGenus(_))));
    }
}
