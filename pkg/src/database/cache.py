import json
import logging
from datetime import datetime

from sqlalchemy import Column, DateTime, Integer, String, Text, create_engine
from sqlalchemy.orm import declarative_base, sessionmaker

from config import DB_DSN

Base = declarative_base()


class TrialRow(Base):
    """Finished experiment cells, keyed by the per-cell key."""
    __tablename__ = "trial_cache"

    id = Column(Integer, primary_key=True, autoincrement=True)
    cache_key = Column(String(64), unique=True, nullable=False, index=True)
    row = Column(Text, nullable=False)  # JSON of the TrialTable row
    created_at = Column(DateTime, default=datetime.utcnow)


_engine = None
_SessionFactory = None
_dsn = DB_DSN


def configure(dsn: str):
    """Point the cache at another database; the engine is rebuilt on next use."""
    global _engine, _SessionFactory, _dsn
    if _engine is not None:
        _engine.dispose()
    _engine, _SessionFactory, _dsn = None, None, dsn


def _get_session():
    """Get or create the SQLite session factory."""
    global _engine, _SessionFactory
    if _engine is None:
        _engine = create_engine(_dsn)
        Base.metadata.create_all(_engine)
        _SessionFactory = sessionmaker(bind=_engine)
    return _SessionFactory()


class TrialCache:

    def __init__(self):
        # Ensure table exists
        _get_session().close()
        logging.info("Using SQLite trial cache at %s", _dsn)

    def add_cache(self, key: str, row: dict):
        """Add or update a cache entry."""
        session = _get_session()
        try:
            existing = session.query(TrialRow).filter(TrialRow.cache_key == key).first()
            if existing:
                existing.row = json.dumps(row)
                existing.created_at = datetime.utcnow()
            else:
                session.add(TrialRow(cache_key=key, row=json.dumps(row)))
            session.commit()
            logging.debug("Cache saved for key: %s", key[:16])
        except Exception as e:
            session.rollback()
            logging.error("Failed to save cache: %s", e)
        finally:
            session.close()

    def get_cache(self, key: str) -> dict:
        session = _get_session()
        try:
            entry = session.query(TrialRow).filter(TrialRow.cache_key == key).first()
            if entry:
                logging.debug("Cache hit for key: %s", key[:16])
                return json.loads(entry.row)
            return {}
        except Exception as e:
            logging.error("Failed to get cache: %s", e)
            return {}
        finally:
            session.close()

    def delete_cache(self, key: str) -> bool:
        session = _get_session()
        try:
            deleted = session.query(TrialRow).filter(TrialRow.cache_key == key).delete()
            session.commit()
            return deleted > 0
        except Exception as e:
            session.rollback()
            logging.error("Failed to delete cache: %s", e)
            return False
        finally:
            session.close()

    def clear(self) -> int:
        session = _get_session()
        try:
            deleted = session.query(TrialRow).delete()
            session.commit()
            logging.info("Deleted %d cached trials", deleted)
            return deleted
        except Exception as e:
            session.rollback()
            logging.error("Failed to clear cache: %s", e)
            return 0
        finally:
            session.close()
