public class AllergyInsuranceAction {
    public void assignAllergy(Allergy allergy) {
        allergyStore.assign(allergy);
    }
    public void validateAllergy(Allergy allergy) {
        allergyStore.validate(allergy);
    }
}
