"""
prefspace/database.py — SQLAlchemy engine, session factory, declarative base for the run archive.
"""
import logging
from typing import Generator

from sqlalchemy import Engine, create_engine
from sqlalchemy.orm import DeclarativeBase, Session, sessionmaker

logger = logging.getLogger(__name__)


# ── Declarative base (all models inherit from this) ──────────────────────────
class Base(DeclarativeBase):
    pass


# ── Engine ───────────────────────────────────────────────────────────────────
def make_engine(url: str) -> Engine:
    options = {"pool_pre_ping": True, "echo": False}
    if not url.startswith("sqlite"):
        options["pool_recycle"] = 3600
    return create_engine(url, **options)


# ── Session factory ──────────────────────────────────────────────────────────
def make_session_factory(engine: Engine) -> sessionmaker:
    return sessionmaker(
        bind=engine,
        autocommit=False,
        autoflush=False,
        expire_on_commit=False,
    )


def init_archive(url: str) -> sessionmaker:
    """Engine plus tables, created on first use."""
    import prefspace.models.run  # noqa: F401  registers the tables with Base.metadata

    engine = make_engine(url)
    try:
        Base.metadata.create_all(bind=engine)
        logger.info(f"Archive tables ready at {engine.url.render_as_string(hide_password=True)}")
    except Exception as e:
        logger.error(f"Failed to create archive tables: {e}")
        raise
    return make_session_factory(engine)


def get_session(factory: sessionmaker) -> Generator[Session, None, None]:
    db: Session = factory()
    try:
        yield db
    finally:
        db.close()
