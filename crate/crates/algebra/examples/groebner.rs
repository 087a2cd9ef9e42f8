//! Groebner basis, Hilbert data and saturation of the twisted cubic
//! and of the same curve with an embedded point.
//!
//!     cargo run --release -p atlas-algebra --example groebner

use atlas_algebra::{buchberger, Field, PrimeField, Ring};

fn main() {
    let f = PrimeField::default();
    let ring = Ring::new(f, 4);
    let x: Vec<_> = (0..4).map(|i| ring.var(i)).collect();
    let minor = |a: usize, b: usize, c: usize, d: usize| {
        ring.sub(&ring.mul(&x[a], &x[b]), &ring.mul(&x[c], &x[d]))
    };
    let cubic = [minor(0, 2, 1, 1), minor(0, 3, 1, 2), minor(1, 3, 2, 2)];
    let gb = buchberger(&ring, &cubic);
    let h = gb.hilbert(8);
    println!(
        "twisted cubic: dim {} degree {} hf {:?}",
        h.projective_dim(),
        h.degree,
        h.hf
    );

    let mut cube = Vec::new();
    for a in 0..4 {
        for b in a..4 {
            for c in b..4 {
                cube.push(ring.mul(&ring.mul(&x[a], &x[b]), &x[c]));
            }
        }
    }
    let embedded = gb.intersect(&buchberger(&ring, &cube));
    println!("with an embedded point: hf {:?}", embedded.hilbert(8).hf);
    println!(
        "saturation recovers the cubic: {}",
        embedded.saturate_irrelevant().same_ideal(&gb)
    );
    let probe = ring.scale(&minor(0, 2, 1, 1), &f.from_i64(3));
    println!("3(x0 x2 - x1^2) in ideal: {}", gb.contains(&probe));
    println!("{}", gb.to_text());
}
