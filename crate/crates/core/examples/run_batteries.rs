fn main() {
    let params = lorentz_seq::verify::VerifyParams::default();
    let t0 = std::time::Instant::now();
    for label in lorentz_seq::verify::all_labels() {
        let t = std::time::Instant::now();
        match lorentz_seq::verify::run_suite(label, &params) {
            Ok(reports) => {
                for r in reports {
                    println!(
                        "{:35} pass={} trials={} failures={} max_residual={:.3e} ({:.2?})",
                        r.label, r.pass, r.trials, r.failures, r.max_residual, t.elapsed()
                    );
                    for d in r.details.iter().take(4) {
                        println!("    {d}");
                    }
                }
            }
            Err(e) => println!("{label}: ERROR {e}"),
        }
    }
    println!("total: {:.2?}", t0.elapsed());
}
