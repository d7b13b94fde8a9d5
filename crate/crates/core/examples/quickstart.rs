use cdanalysis::contour::residue;
use cdanalysis::special::zeta;
use cdanalysis::xform::{laplace, Original, TransformSpec};
use cdanalysis::{gen, CdNumber};

fn main() -> cdanalysis::Result<()> {
    let y = CdNumber::new(2, &[1.0, 0.0, 0.0, 0.0])?;
    let res = residue(|z| (*z - y).inverse(), &y, &gen(2), 0.5, 1e-10)?;
    println!("{res}");

    let orig = Original::right(|t| CdNumber::real((-t).exp()), -1.0);
    let p = CdNumber::new(2, &[2.0, 0.0, 0.5, 0.0])?;
    println!("{}", laplace(&orig, &p, &TransformSpec::linear(2))?);

    println!("{}", zeta(&CdNumber::complex(0.5, 14.134725141734694))?);
    Ok(())
}
