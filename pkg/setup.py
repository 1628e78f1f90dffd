from setuptools import setup, find_packages
import os

# Get the current directory (project root)
current_dir = os.path.dirname(os.path.abspath(__file__))

# Read README from docs directory
readme_path = os.path.join(current_dir, "docs", "README.md")
if os.path.exists(readme_path):
    with open(readme_path, "r", encoding="utf-8") as fh:
        long_description = fh.read()
else:
    long_description = "InterpIQ - Hardy-Orlicz Interpolation Lab"

requirements = [
    "typer>=0.9.0",
    "rich>=13.0.0",
    "python-dotenv>=1.0.0",
    "pandas>=2.0.0",
    "numpy>=1.24.0",
    "scipy>=1.11.0",
]

setup(
    name="interpiq",
    version="1.0.0",
    author="InterpIQ Team",
    description="Hardy-Orlicz Interpolation Lab - numerical diagnostics for interpolating sequences",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(include=["interpiq", "interpiq.*"]),
    include_package_data=True,
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.9",
    install_requires=requirements,
    extras_require={
        "test": ["pytest>=7.4.0", "pytest-cov>=4.1.0", "pytest-xdist>=3.3.1", "coverage>=7.3.0", "hypothesis>=6.88.0"],
    },
    entry_points={
        "console_scripts": [
            "interpiq=interpiq.cli.main:app",
        ],
    },
)
