from __future__ import annotations

import json
from os import F_OK, R_OK, W_OK, access
from pathlib import Path
from typing import IO, Any, Literal

from ..exceptions import FileIsADirectoryError, FileNotExistsError, FilePermissionError, FileWasNotFoundError
from ..types import FilePathType, FuncExceptT, SPath

__all__ = [
    'check_perms',
    'open_file',

    'read_json', 'write_json'
]


def check_perms(
    file: FilePathType, mode: Literal['r', 'w'], strict: bool = False, *, func: FuncExceptT | None = None
) -> bool:
    """
    Confirm whether the user has read or write access to a file.

    For writing, a file that does not exist yet is checked through its closest existing parent,
    so output paths inside directories that are about to be created pass.

    :param file:                    Path to file.
    :param mode:                    ``'r'`` or ``'w'``.
    :param strict:                  Require the file itself to exist.
    :param func:                    Function that this was called from. When given, failures raise.

    :return:                        True if the user has access to the file, else False.

    :raises FileNotExistsError:     File could not be found.
    :raises FilePermissionError:    User does not have access to the file.
    :raises FileIsADirectoryError:  Given path is a directory, not a file.
    :raises FileWasNotFoundError:   Parent directories exist, but the given file could not be found.
    """

    file = Path(str(file) if not isinstance(file, bytes) else file.decode())

    if func is not None and not str(file):
        raise FileNotExistsError('Empty file path!', func, file)

    mode_i = R_OK if mode == 'r' else W_OK

    if file.is_dir():
        if func is not None:
            raise FileIsADirectoryError('Expected a file, got a directory!', func, file)

        return False

    check_file = file

    if mode_i == R_OK or strict:
        strict = True
    else:
        while not check_file.exists() and check_file != check_file.parent:
            check_file = check_file.parent

    got_perms = check_file.exists() and access(check_file, mode_i | F_OK)

    if func is not None and not got_perms:
        if strict and not file.exists():
            if file.parent.exists():
                raise FileWasNotFoundError('The file could not be found!', func, file)

            raise FileNotExistsError('The file and its directory do not exist!', func, file)

        raise FilePermissionError('Insufficient permissions for this file!', func, file)

    return got_perms


def open_file(
    file: FilePathType, mode: Literal['r', 'w'] = 'r', *, newline: str | None = None, func: FuncExceptT | None = None
) -> IO[str]:
    """
    Open a UTF-8 text file after checking permissions. Parent directories of output files are created.

    :param file:        Path of the file.
    :param mode:        ``'r'`` to read, ``'w'`` to write (truncating).
    :param newline:     Forwarded to :py:func:`open`; the csv writers pass ``''``.
    :param func:        Function errors are attributed to.
    """

    if mode == 'w':
        SPath(str(file)).mkdirp()

    check_perms(file, mode, func=func or open_file)

    return open(file, mode, encoding='utf-8', newline=newline)


def read_json(file: FilePathType, *, func: FuncExceptT | None = None) -> Any:
    """Read and parse a JSON document."""

    with open_file(file, 'r', func=func or read_json) as fp:
        return json.load(fp)


def write_json(file: FilePathType, data: Any, *, func: FuncExceptT | None = None) -> None:
    """Write a JSON document, indented, with a trailing newline."""

    with open_file(file, 'w', func=func or write_json) as fp:
        json.dump(data, fp, indent=2)
        fp.write('\n')
