use crate::model::{Instance, Profile};

/// True when every job runs on a machine with `p_ij <= m * q_j`.
pub fn is_m_efficient_profile(instance: &Instance, profile: &Profile) -> bool {
    let m = instance.machine_count() as i64;
    profile
        .as_slice()
        .iter()
        .enumerate()
        .all(|(j, &i)| instance.p(i, j) <= &(instance.fastest(j) * crate::rational::int(m)))
}

/// Moves every job with `p_ij > m * q_j` to its fastest machine (lowest
/// index among ties). The result is m-efficient and its makespan is at most
/// twice the input's.
pub fn m_efficient_transform(instance: &Instance, profile: &Profile) -> Profile {
    let m = crate::rational::int(instance.machine_count() as i64);
    let mut out = profile.as_slice().to_vec();
    for (j, slot) in out.iter_mut().enumerate() {
        let q = instance.fastest(j);
        if instance.p(*slot, j) > &(q * &m) {
            *slot = (0..instance.machine_count())
                .find(|&i| instance.p(i, j) == q)
                .expect("some machine attains q_j");
        }
    }
    Profile::new(out)
}
