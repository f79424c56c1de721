use std::sync::Arc;

use gcnn_vc::orders::build_complete_orders;
use gcnn_vc::shatter::is_shattered;
use gcnn_vc::synth::{synth_kernel, SynthConfig, SynthMode};
use gcnn_vc::{FiniteGroup, Rational, RationalMeasure};

fn main() -> gcnn_vc::Result<()> {
    let g = Arc::new(FiniteGroup::from_spec_str("cyclic:18")?);
    let elem = g.find_order_two_element().expect("even order");
    let config = SynthConfig {
        b: Rational::from_integer(1.into()),
        c: Rational::from_integer(2.into()),
        m: 3,
        g: elem,
        orders: build_complete_orders(3)?,
        mode: SynthMode::OrderTwo,
    };
    let synthesis = synth_kernel(g.clone(), &config)?;
    let mu = RationalMeasure::counting(g);
    let cert = is_shattered(&synthesis.kernel, &synthesis.functions(), &mu)?;
    println!("shattered: {} ({} of 8 witnessed)", cert.shattered, cert.witnessed());
    Ok(())
}
