# exercise: functions
# pattern: bare-function-reference
def greet(name):
    print(f"Hello, {name}!")
greet  # Forgot to call the function with parentheses and an argument
