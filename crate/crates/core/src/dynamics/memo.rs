use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, Mutex, OnceLock};

/// Process-wide memo table. Values are computed outside the lock; if two callers race,
/// the first stored value wins and both observe it, so the table behaves as a function.
pub(crate) struct Memo<K, V> {
    map: OnceLock<Mutex<HashMap<K, Arc<V>>>>,
}

impl<K: Eq + Hash + Clone, V> Memo<K, V> {
    pub const fn new() -> Self {
        Memo {
            map: OnceLock::new(),
        }
    }

    fn table(&self) -> &Mutex<HashMap<K, Arc<V>>> {
        self.map.get_or_init(|| Mutex::new(HashMap::new()))
    }

    pub fn get_or_try<E>(
        &self,
        key: K,
        compute: impl FnOnce() -> Result<V, E>,
    ) -> Result<Arc<V>, E> {
        if let Some(v) = self.table().lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let v = Arc::new(compute()?);
        let mut t = self.table().lock().unwrap();
        Ok(t.entry(key).or_insert(v).clone())
    }
}
