public class HospitalAllergyController {
    public void approveAllergy(Allergy allergy) {
        allergyStore.approve(allergy);
    }
    public void addHospital(Hospital hospital) {
        hospitalStore.add(hospital);
    }
    public void removeAllergy(Allergy allergy) {
        allergyStore.remove(allergy);
    }
}
