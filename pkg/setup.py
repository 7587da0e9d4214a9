# Setup
from setuptools import find_packages, setup

setup(
    name="susceptinet",
    version="0.3.0",
    description="Susceptibility scores, friendship networks and the generalized friendship paradox",
    packages=find_packages(include=["src", "src.*"]),
    python_requires=">=3.10",
    install_requires=[
        "python-dotenv>=1.0.0",
        "numpy>=1.24.0",
        "pandas>=2.0.0",
        "networkx>=3.1",
        "joblib>=1.3.0",
    ],
    extras_require={
        "dev": ["pytest>=7.4.0", "pytest-cov>=4.1.0", "black>=23.0.0", "flake8>=6.0.0", "mypy>=1.0.0"],
    },
    entry_points={"console_scripts": ["susceptinet=src.main:main"]},
)
