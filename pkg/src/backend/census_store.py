from typing import List, Optional

from sqlalchemy import JSON, Column, DateTime, Integer, String, create_engine, func
from sqlalchemy.orm import declarative_base, sessionmaker

from src.backend.vanishing_engine import CensusReport

Base = declarative_base()


class CensusRun(Base):
    __tablename__ = "census_runs"

    id = Column(Integer, primary_key=True, autoincrement=True, index=True)
    run_name = Column(String, unique=True, nullable=False, index=True)
    updated_at = Column(DateTime, default=func.now(), onupdate=func.now(), index=True)
    box = Column(String, nullable=False)  # "RxC"
    mu_max = Column(Integer, nullable=False)
    disagreements = Column(Integer, nullable=False, default=0)
    rows = Column(JSON)  # CSV records


class CensusStore:
    """Handles database interactions for census runs."""

    def __init__(self, db_url="sqlite:///census.db"):
        self.engine = create_engine(db_url)
        Base.metadata.create_all(self.engine)
        self.Session = sessionmaker(bind=self.engine)

    def save_run(self, run_name: str, box: str, mu_max: int, report: CensusReport) -> int:
        """Save a census run by name, replacing an existing run of the same name."""
        records = [row.as_record() for row in report.rows]
        session = self.Session()
        run = session.query(CensusRun).filter_by(run_name=run_name).first()
        if run:
            run.box = box
            run.mu_max = mu_max
            run.disagreements = len(report.disagreements)
            run.rows = records
        else:
            run = CensusRun(
                run_name=run_name,
                box=box,
                mu_max=mu_max,
                disagreements=len(report.disagreements),
                rows=records,
            )
            session.add(run)
        session.commit()
        run_id = run.id
        session.close()
        return run_id

    def load_run(self, run_id: int) -> Optional[dict]:
        """Load a census run by ID, or None when it does not exist."""
        session = self.Session()
        run = session.query(CensusRun).filter_by(id=run_id).first()
        session.close()
        if not run:
            return None
        return {
            "id": run.id,
            "run_name": run.run_name,
            "box": run.box,
            "mu_max": run.mu_max,
            "disagreements": run.disagreements,
            "rows": run.rows or [],
        }

    def list_runs(self) -> List[dict]:
        """Return the stored runs with their IDs, names and summaries."""
        session = self.Session()
        runs = session.query(
            CensusRun.id,
            CensusRun.run_name,
            CensusRun.updated_at,
            CensusRun.box,
            CensusRun.mu_max,
            CensusRun.disagreements,
        ).all()
        session.close()
        return [
            {
                "id": r.id,
                "run_name": r.run_name,
                "updated_at": r.updated_at,
                "box": r.box,
                "mu_max": r.mu_max,
                "disagreements": r.disagreements,
            }
            for r in runs
        ]

    def delete_run(self, run_id: int) -> bool:
        """Delete a census run by ID; False when there was none."""
        session = self.Session()
        run = session.query(CensusRun).filter_by(id=run_id).first()
        if run:
            session.delete(run)
            session.commit()
        session.close()
        return run is not None
