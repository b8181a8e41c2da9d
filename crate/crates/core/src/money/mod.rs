//! Private-key quantum money, its attacks, and a toy public-money scheme.

mod attacks;
mod cloning;
mod game;
mod lightning;
mod wiesner;

pub use attacks::{
    adaptive_attack, counterfeit, guess_and_measure_acceptance, guess_and_measure_attack, recovery_matches,
    AdaptiveOutcome,
};
pub use cloning::{cnot_copier, copier_fidelity, copier_single_copy_fidelity};
pub use game::{security_game, Adversary, AdaptiveAdversary, GuessAdversary, HonestAdversary};
pub use lightning::{lightning_mint, lightning_round_probability, lightning_verify, LightningScheme};
pub use wiesner::{
    encode_bill, encode_qubit, format_bitvec, mint_wiesner, parse_bits, Bank, BankPolicy, BankRecord, Verdict,
    VerifyResult, WiesnerBill,
};
