use maxslope::msp::{msp_certify, msp_verify, SlopeBound};
use maxslope::paperfns::registry;
use maxslope::rigor::{Dyadic, Precision};
use num_bigint::BigInt;
use num_rational::BigRational;

fn main() {
    let start = std::time::Instant::now();
    let reg = registry();
    let h = reg.get("h").unwrap();
    let a = Dyadic::new(BigInt::from(21845), -16);
    let b = Dyadic::from_int(3);
    let slope = SlopeBound::constant(Dyadic::from_int(20)).unwrap();
    let cert = msp_certify(h, &a, &b, &slope, Precision::new(64), &BigRational::from_integer(BigInt::from(1))).unwrap();
    println!("points: {} (certify {:?})", cert.points.len(), start.elapsed());
    let t2 = std::time::Instant::now();
    let v = msp_verify(&cert, &reg).unwrap();
    println!("verify: {:?} ({:?})", v.is_valid(), t2.elapsed());
}
