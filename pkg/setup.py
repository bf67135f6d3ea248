from setuptools import setup, find_packages

setup(
    name="private-gossip",
    version="0.1.0",
    packages=find_packages(exclude=["examples", "examples.*"]),
    install_requires=[
        "langgraph",
        "langchain-core",
        "pydantic>=2",
        "numpy>=1.22",
        "networkx",
        "matplotlib",
    ],
    extras_require={
        "test": ["pytest"],
    },
    entry_points={
        "console_scripts": [
            "private-gossip=private_gossip.harness.cli:main",
        ],
    },
    python_requires=">=3.9",
)
