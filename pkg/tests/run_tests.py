#!/usr/bin/env python3
"""
InterpIQ Test Runner

Test runner with coverage reporting and marker-based test selection.
"""

import sys
import subprocess
import argparse
from pathlib import Path

TEST_TYPES = ["all", "unit", "integration", "geometry", "orlicz", "harmonic", "diagnostics", "cli", "fast"]


def run_command(cmd, description="Running command"):
    """Run a shell command and return success status"""
    print(f"\n{description}...")
    print(f"Command: {' '.join(cmd)}")

    try:
        result = subprocess.run(cmd, check=True, capture_output=True, text=True)
        print(f"✅ {description} completed successfully")
        if result.stdout:
            print(result.stdout)
        return True
    except subprocess.CalledProcessError as e:
        print(f"❌ {description} failed")
        print(e.stdout)
        print(f"Error: {e.stderr}")
        return False


def run_tests(test_type="all", coverage=True, verbose=True, parallel=False):
    """Run tests with specified options"""
    cmd = [sys.executable, "-m", "pytest", "-c", "tests/pytest.ini", "tests/"]

    if verbose:
        cmd.append("-v")

    if coverage:
        cmd.extend([
            "--cov=interpiq",
            "--cov-report=html",
            "--cov-report=term-missing",
            "--cov-fail-under=80",
        ])

    if parallel:
        cmd.extend(["-n", "auto"])

    if test_type == "fast":
        cmd.extend(["-m", "not slow"])
    elif test_type != "all":
        cmd.extend(["-m", test_type])

    return run_command(cmd, f"Running {test_type} tests")


def clean_test_artifacts():
    """Clean test artifacts and cache files"""
    import shutil

    print("\n🧹 Cleaning test artifacts...")
    for name in (".pytest_cache", "htmlcov", "__pycache__", ".hypothesis"):
        for path in Path(".").rglob(name):
            if "examples" in path.parts:
                continue
            shutil.rmtree(path, ignore_errors=True)
            print(f"Removed directory: {path}")
    for name in (".coverage", "coverage.xml", "test-results.xml"):
        path = Path(name)
        if path.exists():
            path.unlink()
            print(f"Removed file: {path}")
    print("✅ Cleanup completed")


def generate_test_report():
    """Generate coverage and JUnit reports"""
    print("\n📊 Generating test report...")
    success = run_command([
        sys.executable, "-m", "pytest",
        "-c", "tests/pytest.ini",
        "tests/",
        "--cov=interpiq",
        "--cov-report=html",
        "--cov-report=xml",
        "--cov-report=term-missing",
        "--junitxml=test-results.xml",
    ], "Generating detailed test report")

    if success:
        print("\n📋 Test Report Generated:")
        print("- HTML Coverage Report: htmlcov/index.html")
        print("- XML Coverage Report: coverage.xml")
        print("- Test Results XML: test-results.xml")

    return success


def main():
    """Main test runner function"""
    parser = argparse.ArgumentParser(description="InterpIQ Test Runner")
    parser.add_argument("--type", choices=TEST_TYPES, default="all", help="Type of tests to run")
    parser.add_argument("--no-coverage", action="store_true", help="Skip coverage reporting")
    parser.add_argument("--quiet", action="store_true", help="Run tests in quiet mode")
    parser.add_argument("--parallel", action="store_true", help="Run tests in parallel (pytest-xdist)")
    parser.add_argument("--report", action="store_true", help="Generate coverage and JUnit reports")
    parser.add_argument("--clean", action="store_true", help="Clean test artifacts before running")
    args = parser.parse_args()

    if args.clean:
        clean_test_artifacts()

    if args.report:
        success = generate_test_report()
    else:
        success = run_tests(
            test_type=args.type,
            coverage=not args.no_coverage,
            verbose=not args.quiet,
            parallel=args.parallel,
        )

    if success:
        print("\n🎉 All tests passed!")
    else:
        print("\n💥 Some tests failed!")
    sys.exit(0 if success else 1)


if __name__ == "__main__":
    main()
