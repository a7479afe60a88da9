fn main() {
    let params = lorentz_seq::verify::VerifyParams::default();
    let t = std::time::Instant::now();
    let r = lorentz_seq::verify::projection_battery(&params).unwrap();
    println!("{} pass={} trials={} failures={} maxres={:.3e} ({:.2?})",
        r.label, r.pass, r.trials, r.failures, r.max_residual, t.elapsed());
    for d in r.details.iter().take(8) { println!("  {d}"); }
}
