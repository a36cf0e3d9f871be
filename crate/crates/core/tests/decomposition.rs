use nsbox::rational::q;
use nsbox::sample::{derive_seed, sample_nonsignaling};
use nsbox::{f_pr, is_bell_local, pr_decompose, BoxTable, Error, PrLabel};

#[test]
fn validated_decompositions_recompose() {
    let mut validated = 0;
    for i in 0..300 {
        let b = sample_nonsignaling(derive_seed(11, i));
        let d = pr_decompose(&b).unwrap();
        assert_eq!(d.p_pr, f_pr(&b).unwrap().f_pr);
        if d.validated.all() {
            validated += 1;
            let Some(r) = d.residual.as_ref() else {
                assert_eq!(BoxTable::pr(d.pr_label), b);
                continue;
            };
            assert_eq!(d.recompose().unwrap(), b);
            assert!(f_pr(r).unwrap().f_pr.is_zero());
            assert!(is_bell_local(r).unwrap().is_member());
        }
    }
    // local boxes with F_PR = 0 decompose trivially
    assert!(validated > 0);
}

#[test]
fn isotropic_box_splits_into_pr_and_noise() {
    let b = BoxTable::mix_of(&[
        (q(2, 5), BoxTable::pr(PrLabel::CANONICAL)),
        (q(3, 5), BoxTable::maximally_mixed()),
    ])
    .unwrap();
    let d = pr_decompose(&b).unwrap();
    assert!(d.validated.all());
    assert_eq!(d.p_pr, q(2, 5));
    assert_eq!(d.pr_label, PrLabel::CANONICAL);
    assert_eq!(d.residual.unwrap(), BoxTable::maximally_mixed());
}

#[test]
fn pure_pr_box_has_no_residual() {
    for l in PrLabel::all() {
        let d = pr_decompose(&BoxTable::pr(l)).unwrap();
        assert_eq!(d.p_pr, q(1, 1));
        assert!(d.residual.is_none());
        assert_eq!(d.pr_label, l);
    }
}

#[test]
fn signaling_box_is_rejected() {
    // Bob's output copies Alice's input
    let b = BoxTable::from_fn(|x, _y, a, b| if (a, b) == (0, x) { q(1, 1) } else { q(0, 1) }).unwrap();
    assert_eq!(pr_decompose(&b).unwrap_err(), Error::Signaling);
}
