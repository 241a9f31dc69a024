"""Documents: vernacular, sessions with undo, compiled units."""

from .compiled import (CompiledUnit, CompileError, canonical_json, compile_file,
                       compile_source, file_hash, parse_unit, record_json,
                       records_digest, require, serialize_unit, state_json)
from .session import (ExecResult, OpenProof, Session, SessionRecord,
                      SessionState, describe_goals, execute_command,
                      new_session, undo)
from .vernacular import parse_command, split_commands

__all__ = [
    "CompileError", "CompiledUnit", "ExecResult", "OpenProof", "Session",
    "SessionRecord", "SessionState", "canonical_json", "compile_file",
    "compile_source", "describe_goals", "execute_command", "file_hash",
    "new_session", "parse_command", "parse_unit", "record_json",
    "records_digest", "require", "serialize_unit", "split_commands", "state_json",
    "undo",
]
