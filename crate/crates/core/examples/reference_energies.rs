//! HF and FCI energies of the bundled H₂O/STO-3G integrals, plus the
//! leading FCI double excitations.

use ionvqe::hamiltonian::{fci_ground_state, hf_energy, parse_fcidump, rank_excitations};

fn main() -> ionvqe::Result<()> {
    let ham = parse_fcidump(ionvqe::H2O_STO3G_FCIDUMP)?;
    let reference = ham.hf_reference();
    let hf = hf_energy(&ham, reference)?;
    let fci = fci_ground_state(&ham)?;
    println!("determinants : {}", fci.basis.len());
    println!("HF energy    : {hf:.6} Ha");
    println!("FCI energy   : {:.6} Ha", fci.energy);
    println!("correlation  : {:.2} mHa", 1e3 * (fci.energy - hf));
    println!("\nleading double excitations:");
    for (i, e) in rank_excitations(&fci, reference, 21).iter().enumerate() {
        println!("{:>3}  {:?}  {:+.5}  {:?}", i + 1, e.indices, e.amplitude, e.kind);
    }
    Ok(())
}
