"""
Verdict model shared by every checker
"""

from typing import Dict, List, Literal, Optional

from pydantic import BaseModel

Status = Literal["holds", "violated", "unknown"]


class Verdict(BaseModel):
    """Outcome of a property check"""
    property: str
    status: Status
    witness: Optional[List[int]] = None
    trace: Optional[List[str]] = None
    reason: str = ""
    states_explored: int = 0
    complete: bool = True
    bounds: Dict[str, Optional[int]] = {}

    @property
    def exit_code(self) -> int:
        return {"holds": 0, "violated": 1, "unknown": 2}[self.status]

    def to_json(self) -> Dict:
        data = {
            "property": self.property,
            "status": self.status,
            "witness": self.witness if self.witness is not None else [],
            "states_explored": self.states_explored,
            "complete": self.complete,
            "bounds": self.bounds,
            "reason": self.reason,
        }
        if self.trace is not None:
            data["trace"] = self.trace
        return data
