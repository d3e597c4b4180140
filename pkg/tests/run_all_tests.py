#!/usr/bin/env python3
"""
Test Runner for the Kernel Workbench

Runs the unit suites and the end-to-end gallery checks with a summary.

Usage:
    python tests/run_all_tests.py
    python tests/run_all_tests.py --fast       # Skip the slow gallery checks
    python tests/run_all_tests.py --suite cli  # Run one suite
"""
import sys
import argparse
from pathlib import Path

import pytest

# Add project directory to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

TESTS_DIR = Path(__file__).parent

SUITES = {
    "spaces": ["test_spaces.py"],
    "measures": ["test_measures.py"],
    "kernels": ["test_kernels.py"],
    "analysis": ["test_analysis.py", "test_cantor.py"],
    "io": ["test_io_reports.py"],
    "cli": ["test_cli.py"],
    "acceptance": ["test_acceptance.py"],
}


def run_suite(name, files, fast=False):
    """Run one suite through pytest; True when every test passed"""
    print(f"🔧 Running {name} tests")
    print("-" * 60)

    args = [str(TESTS_DIR / f) for f in files] + ["-q"]
    if fast:
        args += ["-m", "not slow"]
    code = pytest.main(args)
    # an all-slow suite deselected under --fast is not a failure
    return code in (pytest.ExitCode.OK, pytest.ExitCode.NO_TESTS_COLLECTED)


def main():
    parser = argparse.ArgumentParser(description='Run kernel workbench test suites')
    parser.add_argument('--fast', action='store_true',
                        help='Skip tests marked slow')
    parser.add_argument('--suite', choices=sorted(SUITES),
                        help='Run a single suite')

    args = parser.parse_args()

    print("=" * 80)
    print("Kernel Workbench Test Suite Runner")
    print("=" * 80)

    selected = {args.suite: SUITES[args.suite]} if args.suite else SUITES
    results = []
    for name, files in selected.items():
        print("\n")
        results.append((name, run_suite(name, files, args.fast)))

    # Summary
    print("\n" + "=" * 80)
    print("FINAL TEST RESULTS")
    print("=" * 80)

    all_passed = True
    for test_name, success in results:
        status = "✅ PASSED" if success else "❌ FAILED"
        print(f"{test_name:20} {status}")
        if not success:
            all_passed = False

    print("-" * 80)
    if all_passed:
        print("🎉 ALL TEST SUITES PASSED!")
    else:
        print("⚠️  SOME TESTS FAILED")

    print("=" * 80)
    return all_passed

if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
