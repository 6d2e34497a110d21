use iepoly::construction::{bpv_family, check_congruence, lemma_lower_bound};
use iepoly::{expand, CoprimeTuple, ExpandOptions};
use num_bigint::BigUint;

fn measured_vs_floor(qs: &[u64], r: u64) -> (BigUint, BigUint) {
    let tuple = CoprimeTuple::from_u64s(qs).unwrap();
    let r = BigUint::from(r);
    assert!(check_congruence(&tuple, &r).unwrap().passes());
    let floor = lemma_lower_bound(&tuple, &r)
        .unwrap()
        .height_floor(1 << 20)
        .unwrap();
    let height = expand(&tuple, &ExpandOptions::default()).unwrap().height();
    (height, floor)
}

#[test]
fn small_family_instances() {
    for (qs, r) in [(&[5u64, 13][..], 2), (&[13, 37, 61], 6)] {
        let (height, floor) = measured_vs_floor(qs, r);
        assert!(height >= floor, "{qs:?}: {height} < {floor}");
    }
}

#[test]
fn mixed_branch_instance_reaches_two() {
    let (height, floor) = measured_vs_floor(&[49, 51, 149], 25);
    assert_eq!(floor, BigUint::from(2u32));
    assert!(height >= floor, "height {height}");
}

#[test]
fn half_degree_mode_on_large_instance() {
    let tuple = CoprimeTuple::from_u64s(&[49, 51, 149]).unwrap();
    let full = expand(&tuple, &ExpandOptions::default()).unwrap();
    let half = expand(
        &tuple,
        &ExpandOptions {
            half_degree: true,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(full.degree(), 355200);
    assert_eq!(full, half);
}

#[test]
fn constructed_families_meet_their_bound() {
    // Every family small enough to expand here.
    for (n, k) in [
        (1u64, 1usize),
        (2, 1),
        (5, 1),
        (1, 2),
        (2, 2),
        (3, 2),
        (1, 3),
    ] {
        let f = bpv_family(&BigUint::from(n), k).unwrap();
        let floor = f.lemma_bound.height_floor(1 << 20).unwrap();
        let p = expand(&f.tuple, &ExpandOptions::default()).unwrap();
        assert!(p.height() >= floor, "N = {n}, k = {k}");
        assert!(f.lemma_bound.is_satisfied_by(&p.height()));
    }
}
