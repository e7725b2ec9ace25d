//! Family member profiles, rewritten in full to a JSON-lines file on change.

use std::path::PathBuf;

use healthwise_core::energy::UserProfile;
use healthwise_core::jsonl::{self, StoreError};

#[derive(Debug, Default)]
pub struct ProfileStore {
    path: Option<PathBuf>,
    /// Creation order.
    profiles: Vec<UserProfile>,
    next_id: u64,
}

fn id_number(id: &str) -> Option<u64> {
    id.strip_prefix('u')?.parse().ok()
}

impl ProfileStore {
    pub fn in_memory() -> ProfileStore {
        ProfileStore {
            next_id: 1,
            ..ProfileStore::default()
        }
    }

    /// `used_ids` are ids seen elsewhere (ledger history); they are never
    /// handed out again even if their profile is gone.
    pub fn open<'a>(
        path: impl Into<PathBuf>,
        used_ids: impl IntoIterator<Item = &'a str>,
    ) -> Result<ProfileStore, StoreError> {
        let path = path.into();
        let profiles: Vec<UserProfile> = jsonl::read_all(&path)?;
        let highest = profiles
            .iter()
            .filter_map(|p| id_number(&p.id))
            .chain(used_ids.into_iter().filter_map(id_number))
            .max()
            .unwrap_or(0);
        Ok(ProfileStore {
            path: Some(path),
            profiles,
            next_id: highest + 1,
        })
    }

    pub fn list(&self) -> &[UserProfile] {
        &self.profiles
    }

    pub fn get(&self, id: &str) -> Option<&UserProfile> {
        self.profiles.iter().find(|p| p.id == id)
    }

    fn commit(&mut self, next: Vec<UserProfile>) -> Result<(), StoreError> {
        if let Some(path) = &self.path {
            jsonl::write_all(path, &next)?;
        }
        self.profiles = next;
        Ok(())
    }

    /// Stores `profile` under a fresh id, which is returned. The caller
    /// validates first.
    pub fn create(&mut self, mut profile: UserProfile) -> Result<String, StoreError> {
        profile.id = format!("u{}", self.next_id);
        let mut next = self.profiles.clone();
        next.push(profile.clone());
        self.commit(next)?;
        self.next_id += 1;
        Ok(profile.id)
    }

    /// Replaces the profile with the same id. `Ok(false)` if there is none.
    pub fn update(&mut self, profile: UserProfile) -> Result<bool, StoreError> {
        let Some(at) = self.profiles.iter().position(|p| p.id == profile.id) else {
            return Ok(false);
        };
        let mut next = self.profiles.clone();
        next[at] = profile;
        self.commit(next)?;
        Ok(true)
    }

    pub fn delete(&mut self, id: &str) -> Result<bool, StoreError> {
        let next: Vec<UserProfile> = self.profiles.iter().filter(|p| p.id != id).cloned().collect();
        if next.len() == self.profiles.len() {
            return Ok(false);
        }
        self.commit(next)?;
        Ok(true)
    }
}
