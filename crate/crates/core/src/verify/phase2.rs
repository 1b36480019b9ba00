use crate::envy::two_phase::balance_holds;

/// True iff every snapshot of phase-2 counts has sorted adjacent gaps at
/// most `threshold` and largest count at most `(n − 1) · threshold`.
pub fn phase2_balance_check(w_history: &[Vec<u64>], threshold: u64) -> bool {
    w_history.iter().all(|w| balance_holds(w, threshold))
}
