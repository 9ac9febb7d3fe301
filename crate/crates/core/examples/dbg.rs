use ccm_core::catalog::quantum::{example5, family_for};
use ccm_core::quantum::{quantum_stackel_n, transformed_hamiltonian};
use std::time::Instant;

fn main() {
    let ex = example5();
    let spec = &ex.transforms[0];
    let family = family_for(&ex, spec).unwrap();
    let base = ex.base_hamiltonian();
    let kt = quantum_stackel_n(&family, &base, &ex.u, &ex.shift).unwrap();
    let ht = transformed_hamiltonian(&base, &ex.u, &ex.shift).unwrap();
    eprintln!("kt terms:");
    for (idx, c) in kt.terms() {
        eprintln!("  {:?}: num {} terms, den {} terms", idx, c.num().terms().len(), c.den_expanded().terms().len());
    }
    eprintln!("ht terms:");
    for (idx, c) in ht.terms() {
        eprintln!("  {:?}: num {} terms, den {} terms", idx, c.num().terms().len(), c.den_expanded().terms().len());
    }
    // time one representative scalar product and one add
    let big = kt.coefficient((2,0));
    let small = ht.coefficient((2,0));
    let t = Instant::now(); let prod = big.mul(&small); eprintln!("one mul: {:?} -> num {} terms", t.elapsed(), prod.num().terms().len());
    let big2 = kt.coefficient((0,2));
    let t = Instant::now(); let sum = prod.add(&big2.mul(&small)); eprintln!("mul+add: {:?} -> num {} terms", t.elapsed(), sum.num().terms().len());
    let t = Instant::now(); let d = big.differentiate(1).unwrap(); eprintln!("diff: {:?} -> num {} terms", t.elapsed(), d.num().terms().len());
    // raw poly products for comparison
    let t = Instant::now();
    let raw = big.num().mul(small.num());
    eprintln!("raw num x num: {:?} -> {} terms", t.elapsed(), raw.terms().len());
    let bigden = big.den_expanded();
    let t = Instant::now();
    let raw2 = big.num().mul(&bigden);
    eprintln!("raw num x den(332): {:?} -> {} terms", t.elapsed(), raw2.terms().len());
}
// appended probe
