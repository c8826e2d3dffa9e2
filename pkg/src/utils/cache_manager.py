from typing import Any, Dict, Optional
import json
import os
import hashlib
from ..config import Config
from ..errors import DataFormatError
from ..plantlab.dictionary import DataDictionary
from ..plantlab.dictionary_io import read_dictionary, write_dictionary, metadata_path
from .logger import Logger

class DictionaryCache:
    """On-disk cache of generated data dictionaries keyed by their recipe."""

    def __init__(self, cache_dir: str = Config.CACHE_DIR, logger: Optional[Logger] = None):
        self.cache_dir = cache_dir
        self.logger = logger
        self._ensure_cache_dir()

    def _ensure_cache_dir(self):
        if not os.path.exists(self.cache_dir):
            os.makedirs(self.cache_dir)

    def _get_cache_key(self, prefix: str, data: Any) -> str:
        """Generate a cache key from prefix and recipe."""
        if isinstance(data, (str, bytes)):
            content = data
        else:
            content = json.dumps(data, sort_keys=True)

        hash_obj = hashlib.md5(content.encode('utf-8'))
        return f"{prefix}_{hash_obj.hexdigest()}"

    def _path(self, key: str) -> str:
        return os.path.join(self.cache_dir, f"{key}.csv")

    def _log(self, operation: str, key: str, success: bool) -> None:
        if self.logger is not None:
            self.logger.log_cache(operation, key, success)

    def key_for(self, recipe: Dict[str, Any]) -> str:
        return self._get_cache_key(str(recipe.get('source', 'dictionary')), recipe)

    def get(self, recipe: Dict[str, Any]) -> Optional[DataDictionary]:
        """Cached dictionary for ``recipe``, or ``None``; unreadable entries are dropped."""
        key = self.key_for(recipe)
        path = self._path(key)

        if not os.path.exists(path):
            self._log('get', key, False)
            return None

        try:
            dictionary = read_dictionary(path)
        except DataFormatError as e:
            if self.logger is not None:
                self.logger.warning("cache_entry_corrupt", key=key, error=str(e))
            self.invalidate(recipe)
            return None

        self._log('get', key, True)
        return dictionary

    def set(self, recipe: Dict[str, Any], dictionary: DataDictionary) -> str:
        key = self.key_for(recipe)
        write_dictionary(dictionary, self._path(key))
        self._log('set', key, True)
        return key

    def invalidate(self, recipe: Dict[str, Any]) -> None:
        key = self.key_for(recipe)
        path = self._path(key)
        for file in (path, str(metadata_path(path))):
            if os.path.exists(file):
                os.remove(file)
        self._log('invalidate', key, True)

    def get_stats(self) -> Dict[str, Any]:
        stats = {'total_entries': 0, 'total_size': 0}
        for filename in os.listdir(self.cache_dir):
            filepath = os.path.join(self.cache_dir, filename)
            if filename.endswith('.csv'):
                stats['total_entries'] += 1
            stats['total_size'] += os.path.getsize(filepath)
        return stats
