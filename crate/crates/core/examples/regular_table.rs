//! Asymptotic expansion of the number of d-regular graphs, order by order,
//! next to the exact count.

use factorx::exact::exact_regular_count;
use factorx::numeric::Scientific;
use factorx::regular::{rg_log_expansion, PROVEN_ORDER};

fn main() -> factorx::Result<()> {
    let (n, d) = (16, 8);
    let exact = exact_regular_count(n, d)?.ln();
    println!("n={n} d={d} exact ln RG = {exact:.10}");
    for k in 1..=PROVEN_ORDER {
        let r = rg_log_expansion(n, d, k, false)?;
        println!(
            "k={k} ln RG ~ {:.10}  gap {:+.3e}",
            r.log_value,
            r.log_value - exact
        );
    }

    let r = rg_log_expansion(1000, 500, PROVEN_ORDER, false)?;
    let s = r.scientific();
    println!(
        "RG(1000,500) ~ {} x 10^{}",
        s.mantissa_string(11),
        s.exponent
    );
    let s = Scientific::from_ln_f64(exact);
    println!(
        "RG({n},{d}) = {} x 10^{}",
        s.mantissa_string(11),
        s.exponent
    );
    Ok(())
}
