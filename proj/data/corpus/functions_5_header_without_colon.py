# exercise: functions
# pattern: missing-colon
def greet(name)
    print(f"Hello, {name}!")

greet("Ada")
